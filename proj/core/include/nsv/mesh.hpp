#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nsv/geometry.hpp"

namespace nsv {

/// Vertex indices of a simplex; only the first dim+1 entries are used.
using CellVertices = std::array<int, 4>;

/// A boundary facet (edge in 2D, triangle in 3D). Marker 0 means no-slip.
struct BoundaryFacet {
  int marker = 0;
  std::array<int, 3> vertices{-1, -1, -1};
};

/// Axis-aligned box [lower, upper] in `dim` dimensions.
struct Box {
  int dim = 2;
  Point lower{0.0, 0.0, 0.0};
  Point upper{1.0, 1.0, 1.0};

  static Box unit(int dim);
};

/// Conforming simplicial mesh of a polytopal domain.
///
/// Immutable after construction. The constructor validates every invariant:
/// positively oriented cells, index ranges, and that the boundary facet list
/// covers exactly the facets owned by a single cell.
class Mesh {
 public:
  /// Throws TopologyError when an invariant fails. `parent` maps each cell to
  /// the coarse cell it was refined from and may be empty.
  Mesh(int dim, std::vector<Point> vertices, std::vector<CellVertices> cells,
       std::vector<BoundaryFacet> boundary, std::vector<int> parent = {});

  int dim() const noexcept { return dim_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<CellVertices>& cells() const noexcept { return cells_; }
  const std::vector<BoundaryFacet>& boundary() const noexcept { return boundary_; }
  const std::vector<int>& parent() const noexcept { return parent_; }

  std::span<const int> cell(std::size_t c) const {
    return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)};
  }

  double volume(std::size_t c) const { return volume_[c]; }
  /// Cell diameter h_T (longest edge).
  double diameter(std::size_t c) const { return diameter_[c]; }
  /// Diameter of the inscribed ball, rho_T.
  double inball_diameter(std::size_t c) const { return inball_[c]; }

  /// Mesh size h = max_T h_T.
  double h() const noexcept { return h_; }
  /// max_T h_T / rho_T.
  double shape_regularity() const noexcept { return shape_regularity_; }
  /// max_T h / h_T.
  double quasi_uniformity() const noexcept { return quasi_uniformity_; }
  double total_volume() const noexcept { return total_volume_; }

  /// Index of the cell containing `x` (brute force, tolerance 1e-12 in
  /// barycentric coordinates); -1 when outside.
  long locate(const Point& x) const;

 private:
  void validate_and_measure();

  int dim_;
  std::vector<Point> vertices_;
  std::vector<CellVertices> cells_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<int> parent_;

  std::vector<double> volume_;
  std::vector<double> diameter_;
  std::vector<double> inball_;
  double h_ = 0.0;
  double shape_regularity_ = 0.0;
  double quasi_uniformity_ = 0.0;
  double total_volume_ = 0.0;
};

/// Signed volume of the simplex spanned by the listed vertices.
double signed_volume(int dim, const std::vector<Point>& vertices, const CellVertices& cell);

/// Structured mesh of `box` with n subdivisions per axis: 2n^2 triangles in
/// 2D, 6n^3 Kuhn tetrahedra in 3D.
Mesh build_structured(const Box& box, int n);

/// Uniform refinement into 2^dim children per cell. Red refinement in 2D; in
/// 3D the interior octahedron is split along its shortest diagonal, which
/// reproduces Bey's refinement on Kuhn meshes and keeps them self-similar.
Mesh refine_uniform(const Mesh& mesh);

/// Maps every cell of `fine` to its ancestor in a mesh `levels` refinements
/// coarser, following the parent links of the intermediate meshes in order
/// (coarsest first, `fine` last).
std::vector<int> ancestor_map(std::span<const Mesh* const> chain);

Mesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

}  // namespace nsv
