#include <Eigen/Dense>
#include <map>

#include "nsv/error.hpp"
#include "nsv/fem.hpp"

namespace nsv {

namespace {

// Local edges (i, j), lexicographic.
constexpr std::array<std::array<int, 2>, 3> kEdges2{{{0, 1}, {0, 2}, {1, 2}}};
constexpr std::array<std::array<int, 2>, 6> kEdges3{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

std::span<const std::array<int, 2>> local_edges(int dim) {
  if (dim == 2) return kEdges2;
  return kEdges3;
}

}  // namespace

double p2_basis(int dim, int a, const std::array<double, 4>& l) {
  if (a <= dim) return l[a] * (2.0 * l[a] - 1.0);
  const auto e = local_edges(dim)[a - dim - 1];
  return 4.0 * l[e[0]] * l[e[1]];
}

void p2_basis_grad(int dim, int a, const std::array<double, 4>& l, const std::array<Vec3, 4>& gl, Vec3& out) {
  if (a <= dim) {
    out = (4.0 * l[a] - 1.0) * gl[a];
    return;
  }
  const auto e = local_edges(dim)[a - dim - 1];
  out = 4.0 * (l[e[0]] * gl[e[1]] + l[e[1]] * gl[e[0]]);
}

MixedSpace::MixedSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw ValidationError("MixedSpace needs a mesh");
  const int d = dim();
  const int npc = nodes_per_cell();
  rule_ = &degree5_rule(d);
  const auto& verts = mesh_->vertices();
  const std::size_t nv = verts.size();

  nodes_ = verts;
  std::map<std::pair<int, int>, int> edge_node;
  cell_nodes_.resize(mesh_->num_cells() * npc);
  for (std::size_t c = 0; c < mesh_->num_cells(); ++c) {
    const auto v = mesh_->cell(c);
    int* out = cell_nodes_.data() + c * npc;
    for (int i = 0; i <= d; ++i) out[i] = v[i];
    int k = d + 1;
    for (const auto& e : local_edges(d)) {
      const auto key = std::minmax(v[e[0]], v[e[1]]);
      auto [it, inserted] = edge_node.try_emplace({key.first, key.second}, static_cast<int>(nodes_.size()));
      if (inserted) nodes_.push_back(midpoint(verts[key.first], verts[key.second]));
      out[k++] = it->second;
    }
  }

  dirichlet_.assign(nodes_.size() * d, 0);
  auto mark = [&](int node) {
    for (int comp = 0; comp < d; ++comp) dirichlet_[vel_dof(node, comp)] = 1;
  };
  for (const auto& f : mesh_->boundary()) {
    for (int i = 0; i < d; ++i) mark(f.vertices[i]);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const auto key = std::minmax(f.vertices[i], f.vertices[j]);
        mark(edge_node.at({key.first, key.second}));
      }
  }

  geometry_.resize(mesh_->num_cells());
  mean_weights_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
  for (std::size_t c = 0; c < mesh_->num_cells(); ++c) {
    const auto v = mesh_->cell(c);
    Eigen::Matrix3d jac = Eigen::Matrix3d::Identity();
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < d; ++r) jac(r, i) = verts[v[i + 1]][r] - verts[v[0]][r];
    const Eigen::Matrix3d inv = jac.inverse();
    auto& g = geometry_[c];
    g.volume = mesh_->volume(c);
    Vec3 sum{0.0, 0.0, 0.0};
    for (int i = 1; i <= d; ++i) {
      for (int r = 0; r < 3; ++r) g.grad_lambda[i][r] = r < d ? inv(i - 1, r) : 0.0;
      sum = sum + g.grad_lambda[i];
    }
    g.grad_lambda[0] = -1.0 * sum;
    for (int i = 0; i <= d; ++i) mean_weights_[v[i]] += g.volume / (d + 1);
  }

  phi_.resize(rule_->size() * npc);
  for (std::size_t q = 0; q < rule_->size(); ++q)
    for (int a = 0; a < npc; ++a) phi_[q * npc + a] = p2_basis(d, a, rule_->points[q]);
}

void MixedSpace::grad_phi(std::size_t c, std::size_t q, std::span<Vec3> out) const {
  const auto& g = geometry_[c];
  for (int a = 0; a < nodes_per_cell(); ++a) p2_basis_grad(dim(), a, rule_->points[q], g.grad_lambda, out[a]);
}

Point MixedSpace::map(std::size_t c, const std::array<double, 4>& bary) const {
  const auto v = mesh_->cell(c);
  const auto& x = mesh_->vertices();
  Point p{0.0, 0.0, 0.0};
  for (int i = 0; i <= dim(); ++i) p = p + bary[i] * x[v[i]];
  return p;
}

Point MixedSpace::quad_point(std::size_t c, std::size_t q) const { return map(c, rule_->points[q]); }

}  // namespace nsv
