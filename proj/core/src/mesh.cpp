#include "nsv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nsv/error.hpp"

namespace nsv {

namespace {

using FacetKey = std::array<int, 3>;

FacetKey sorted_facet(int dim, std::span<const int> v) {
  FacetKey key{-1, -1, -1};
  for (int i = 0; i < dim; ++i) key[i] = v[i];
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

/// Facets of a simplex: the one opposite to each vertex.
std::vector<FacetKey> cell_facets(int dim, std::span<const int> cell) {
  std::vector<FacetKey> facets;
  for (int skip = 0; skip <= dim; ++skip) {
    std::array<int, 3> f{-1, -1, -1};
    int k = 0;
    for (int i = 0; i <= dim; ++i)
      if (i != skip) f[k++] = cell[i];
    facets.push_back(sorted_facet(dim, f));
  }
  return facets;
}

double facet_measure(int dim, const std::vector<Point>& x, const FacetKey& f) {
  if (dim == 2) return norm(x[f[1]] - x[f[0]]);
  return 0.5 * norm(cross(x[f[1]] - x[f[0]], x[f[2]] - x[f[0]]));
}

void orient_positive(int dim, const std::vector<Point>& vertices, std::vector<CellVertices>& cells) {
  for (auto& c : cells)
    if (signed_volume(dim, vertices, c) < 0.0) std::swap(c[0], c[1]);
}

std::vector<BoundaryFacet> boundary_from_topology(int dim, const std::vector<CellVertices>& cells) {
  std::map<FacetKey, int> count;
  for (const auto& c : cells)
    for (const auto& f : cell_facets(dim, std::span<const int>(c.data(), dim + 1))) ++count[f];
  std::vector<BoundaryFacet> boundary;
  for (const auto& [f, n] : count)
    if (n == 1) boundary.push_back({0, f});
  return boundary;
}

}  // namespace

Box Box::unit(int dim) {
  Box b;
  b.dim = dim;
  b.upper = {1.0, 1.0, dim == 3 ? 1.0 : 0.0};
  return b;
}

double signed_volume(int dim, const std::vector<Point>& x, const CellVertices& c) {
  const Vec3 a = x[c[1]] - x[c[0]];
  const Vec3 b = x[c[2]] - x[c[0]];
  if (dim == 2) return 0.5 * (a[0] * b[1] - a[1] * b[0]);
  const Vec3 d = x[c[3]] - x[c[0]];
  return dot(a, cross(b, d)) / 6.0;
}

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<CellVertices> cells,
           std::vector<BoundaryFacet> boundary, std::vector<int> parent)
    : dim_(dim),
      vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_(std::move(boundary)),
      parent_(std::move(parent)) {
  validate_and_measure();
}

void Mesh::validate_and_measure() {
  if (dim_ != 2 && dim_ != 3) throw TopologyError("dimension must be 2 or 3");
  if (cells_.empty()) throw TopologyError("mesh has no cells");
  if (!parent_.empty() && parent_.size() != cells_.size())
    throw TopologyError("parent map length does not match cell count");

  const int nv = static_cast<int>(vertices_.size());
  const std::size_t nc = cells_.size();
  volume_.resize(nc);
  diameter_.resize(nc);
  inball_.resize(nc);

  std::map<FacetKey, int> facet_count;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto v = cell(c);
    for (int i = 0; i <= dim_; ++i)
      if (v[i] < 0 || v[i] >= nv) throw TopologyError("vertex index out of range", static_cast<long>(c));
    const double vol = signed_volume(dim_, vertices_, cells_[c]);
    if (!(vol > 0.0)) throw TopologyError("inverted or degenerate cell (signed volume " + std::to_string(vol) + ")", static_cast<long>(c));
    volume_[c] = vol;

    double diam = 0.0;
    for (int i = 0; i <= dim_; ++i)
      for (int j = i + 1; j <= dim_; ++j) diam = std::max(diam, norm(vertices_[v[j]] - vertices_[v[i]]));
    diameter_[c] = diam;

    double surface = 0.0;
    for (const auto& f : cell_facets(dim_, v)) {
      surface += facet_measure(dim_, vertices_, f);
      ++facet_count[f];
    }
    // inradius r = dim * |T| / |dT|
    inball_[c] = 2.0 * dim_ * vol / surface;
  }

  std::map<FacetKey, int> boundary_seen;
  for (const auto& b : boundary_) {
    for (int i = 0; i < dim_; ++i)
      if (b.vertices[i] < 0 || b.vertices[i] >= nv) throw TopologyError("boundary facet vertex index out of range");
    const auto key = sorted_facet(dim_, b.vertices);
    auto it = facet_count.find(key);
    if (it == facet_count.end()) throw TopologyError("boundary facet is not a facet of any cell");
    if (it->second != 1) throw TopologyError("boundary facet is shared by two cells");
    if (++boundary_seen[key] > 1) throw TopologyError("duplicate boundary facet");
  }
  for (const auto& [key, n] : facet_count) {
    if (n > 2) throw TopologyError("facet shared by more than two cells (non-conforming mesh)");
    if (n == 1 && !boundary_seen.contains(key)) throw TopologyError("topological boundary facet missing from boundary list");
  }

  h_ = *std::max_element(diameter_.begin(), diameter_.end());
  total_volume_ = std::accumulate(volume_.begin(), volume_.end(), 0.0);
  shape_regularity_ = 0.0;
  quasi_uniformity_ = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    shape_regularity_ = std::max(shape_regularity_, diameter_[c] / inball_[c]);
    quasi_uniformity_ = std::max(quasi_uniformity_, h_ / diameter_[c]);
  }
}

long Mesh::locate(const Point& x) const {
  auto volume_of = [&](const std::array<Point, 4>& p) {
    const Vec3 a = p[1] - p[0];
    const Vec3 b = p[2] - p[0];
    if (dim_ == 2) return 0.5 * (a[0] * b[1] - a[1] * b[0]);
    return dot(a, cross(b, p[3] - p[0])) / 6.0;
  };
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto v = cell(c);
    std::array<Point, 4> pts{};
    for (int i = 0; i <= dim_; ++i) pts[i] = vertices_[v[i]];
    // Barycentric coordinate i: volume with vertex i replaced by x.
    bool inside = true;
    for (int i = 0; i <= dim_ && inside; ++i) {
      auto sub = pts;
      sub[i] = x;
      inside = volume_of(sub) / volume_[c] >= -1e-12;
    }
    if (inside) return static_cast<long>(c);
  }
  return -1;
}

Mesh build_structured(const Box& box, int n) {
  if (n < 1) throw ValidationError("structured mesh needs n >= 1");
  if (box.dim != 2 && box.dim != 3) throw ValidationError("box dimension must be 2 or 3");
  for (int d = 0; d < box.dim; ++d)
    if (!(box.upper[d] > box.lower[d])) throw ValidationError("degenerate box extent along axis " + std::to_string(d));

  const int dim = box.dim;
  const int m = n + 1;
  auto coord = [&](int d, int i) {
    return i == n ? box.upper[d] : box.lower[d] + (box.upper[d] - box.lower[d]) * i / n;
  };

  std::vector<Point> vertices;
  std::vector<CellVertices> cells;
  if (dim == 2) {
    auto vid = [&](int i, int j) { return j * m + i; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) vertices.push_back({coord(0, i), coord(1, j), 0.0});
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1});
        cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1});
      }
  } else {
    auto vid = [&](int i, int j, int k) { return (k * m + j) * m + i; };
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) vertices.push_back({coord(0, i), coord(1, j), coord(2, k)});
    // Kuhn subdivision: one tetrahedron per axis permutation, each following
    // a monotone path from the low corner to the high corner of the cube.
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (const auto& p : perms) {
            std::array<int, 3> idx{i, j, k};
            CellVertices c{};
            c[0] = vid(idx[0], idx[1], idx[2]);
            for (int s = 0; s < 3; ++s) {
              ++idx[p[s]];
              c[s + 1] = vid(idx[0], idx[1], idx[2]);
            }
            cells.push_back(c);
          }
  }
  orient_positive(dim, vertices, cells);
  auto boundary = boundary_from_topology(dim, cells);
  return Mesh(dim, std::move(vertices), std::move(cells), std::move(boundary));
}

Mesh refine_uniform(const Mesh& mesh) {
  const int dim = mesh.dim();
  std::vector<Point> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint_of;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint_of.try_emplace({key.first, key.second}, static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back(midpoint(vertices[a], vertices[b]));
    return it->second;
  };

  std::vector<CellVertices> cells;
  std::vector<int> parent;
  cells.reserve(mesh.num_cells() * (dim == 2 ? 4 : 8));
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    if (dim == 2) {
      const int m01 = mid(v[0], v[1]), m02 = mid(v[0], v[2]), m12 = mid(v[1], v[2]);
      cells.push_back({v[0], m01, m02, -1});
      cells.push_back({m01, v[1], m12, -1});
      cells.push_back({m02, m12, v[2], -1});
      cells.push_back({m01, m12, m02, -1});
    } else {
      int m[4][4];
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m[i][j] = m[j][i] = mid(v[i], v[j]);
      for (int i = 0; i < 4; ++i) {
        CellVertices child{};
        child[0] = v[i];
        int k = 1;
        for (int j = 0; j < 4; ++j)
          if (j != i) child[k++] = m[i][j];
        cells.push_back(child);
      }
      // Octahedron diagonals join midpoints of opposite edges (a,b)-(c,d).
      const std::array<std::array<int, 4>, 3> diagonals{{{0, 2, 1, 3}, {0, 1, 2, 3}, {0, 3, 1, 2}}};
      // Shortest diagonal; ties go to the one whose opposite parent edges
      // are closest in length, which does not depend on vertex order.
      int best = 0;
      double best_len = 0.0, best_skew = 0.0;
      for (int d = 0; d < 3; ++d) {
        const auto& g = diagonals[d];
        const double len = norm(vertices[m[g[0]][g[1]]] - vertices[m[g[2]][g[3]]]);
        const double skew = std::abs(norm(vertices[v[g[0]]] - vertices[v[g[1]]]) -
                                     norm(vertices[v[g[2]]] - vertices[v[g[3]]]));
        const bool shorter = len < best_len * (1.0 - 1e-10);
        const bool tie = !shorter && len <= best_len * (1.0 + 1e-10);
        if (d == 0 || shorter || (tie && skew < best_skew - 1e-10 * best_len)) {
          best = d;
          best_len = len;
          best_skew = skew;
        }
      }
      const auto& g = diagonals[best];
      const int a = g[0], b = g[1], cc = g[2], d = g[3];
      const int p = m[a][b], q = m[cc][d];
      const std::array<int, 4> ring{m[a][cc], m[cc][b], m[b][d], m[d][a]};
      for (int r = 0; r < 4; ++r) cells.push_back({p, q, ring[r], ring[(r + 1) % 4]});
    }
    for (int k = 0; k < (dim == 2 ? 4 : 8); ++k) parent.push_back(static_cast<int>(c));
  }

  std::vector<BoundaryFacet> boundary;
  for (const auto& f : mesh.boundary()) {
    const auto& v = f.vertices;
    if (dim == 2) {
      const int m = mid(v[0], v[1]);
      boundary.push_back({f.marker, {v[0], m, -1}});
      boundary.push_back({f.marker, {m, v[1], -1}});
    } else {
      const int m01 = mid(v[0], v[1]), m02 = mid(v[0], v[2]), m12 = mid(v[1], v[2]);
      boundary.push_back({f.marker, {v[0], m01, m02}});
      boundary.push_back({f.marker, {m01, v[1], m12}});
      boundary.push_back({f.marker, {m02, m12, v[2]}});
      boundary.push_back({f.marker, {m01, m12, m02}});
    }
  }

  orient_positive(dim, vertices, cells);
  return Mesh(dim, std::move(vertices), std::move(cells), std::move(boundary), std::move(parent));
}

std::vector<int> ancestor_map(std::span<const Mesh* const> chain) {
  if (chain.empty()) return {};
  const Mesh& fine = *chain.back();
  std::vector<int> map(fine.num_cells());
  std::iota(map.begin(), map.end(), 0);
  for (std::size_t level = chain.size() - 1; level > 0; --level) {
    const auto& parent = chain[level]->parent();
    if (parent.size() != chain[level]->num_cells())
      throw ValidationError("mesh in refinement chain lacks parent links");
    for (auto& c : map) c = parent[c];
  }
  return map;
}

}  // namespace nsv
