#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nsv/fields.hpp"
#include "nsv/mesh.hpp"
#include "nsv/quadrature.hpp"

namespace nsv {

using SparseOperator = Eigen::SparseMatrix<double>;

/// Affine cell data: volume and gradients of the barycentric coordinates.
struct CellGeometry {
  double volume = 0.0;
  std::array<Vec3, 4> grad_lambda{};
};

/// Taylor-Hood P2 velocity / P1 pressure layout on a simplicial mesh.
///
/// Velocity nodes are the mesh vertices followed by edge midpoints; velocity
/// dofs are interleaved, dof = node * dim + component. Pressure dofs are the
/// mesh vertices. Local P2 ordering on a cell: vertices, then edges (i, j)
/// with i < j in lexicographic order.
class MixedSpace {
 public:
  explicit MixedSpace(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  int dim() const noexcept { return mesh_->dim(); }
  int nodes_per_cell() const noexcept { return dim() == 2 ? 6 : 10; }

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t n_vel() const noexcept { return nodes_.size() * dim(); }
  std::size_t n_pre() const noexcept { return mesh_->num_vertices(); }
  std::size_t num_cells() const noexcept { return mesh_->num_cells(); }

  std::span<const int> cell_nodes(std::size_t c) const {
    return {cell_nodes_.data() + c * nodes_per_cell(), static_cast<std::size_t>(nodes_per_cell())};
  }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  int vel_dof(int node, int comp) const noexcept { return node * dim() + comp; }

  bool is_dirichlet(std::size_t dof) const { return dirichlet_[dof] != 0; }
  const std::vector<char>& dirichlet_mask() const noexcept { return dirichlet_; }

  /// m_i = integral of the P1 basis function i; m . p is the mean of p
  /// times |Omega|.
  const Eigen::VectorXd& pressure_mean_weights() const noexcept { return mean_weights_; }

  const CellGeometry& geometry(std::size_t c) const { return geometry_[c]; }
  const QuadratureRule& rule() const noexcept { return *rule_; }

  /// P2 basis value at reference quadrature point q.
  double phi(std::size_t q, int a) const { return phi_[q * nodes_per_cell() + a]; }
  /// Physical gradients of the P2 basis on cell c at quadrature point q.
  void grad_phi(std::size_t c, std::size_t q, std::span<Vec3> out) const;
  /// Physical location of quadrature point q on cell c.
  Point quad_point(std::size_t c, std::size_t q) const;
  /// Physical point from barycentric coordinates on cell c.
  Point map(std::size_t c, const std::array<double, 4>& bary) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  const QuadratureRule* rule_;
  std::vector<Point> nodes_;
  std::vector<int> cell_nodes_;
  std::vector<char> dirichlet_;
  Eigen::VectorXd mean_weights_;
  std::vector<CellGeometry> geometry_;
  std::vector<double> phi_;
};

/// P2 basis on barycentric coordinates (values and derivatives with respect
/// to the barycentric coordinates).
double p2_basis(int dim, int a, const std::array<double, 4>& lambda);
void p2_basis_grad(int dim, int a, const std::array<double, 4>& lambda, const std::array<Vec3, 4>& grad_lambda,
                   Vec3& out);

/// Velocity (and optional pressure) coefficients tied to a space.
struct FeFunction {
  const MixedSpace* space = nullptr;
  Eigen::VectorXd velocity;
  std::optional<Eigen::VectorXd> pressure;

  static FeFunction zero(const MixedSpace& space);
};

/// P2 nodal interpolant of a vector field.
Eigen::VectorXd interpolate(const MixedSpace& space, const std::function<Vec3(const Point&)>& f);
/// P1 nodal interpolant of a scalar field.
Eigen::VectorXd interpolate_pressure(const MixedSpace& space, const ScalarField& p);
void zero_dirichlet(const MixedSpace& space, Eigen::VectorXd& v);

/// Value and gradient of a velocity coefficient vector at quadrature point q of cell c.
void evaluate_velocity(const MixedSpace& space, const Eigen::VectorXd& v, std::size_t c, std::size_t q,
                       std::span<const Vec3> grads, Vec3& value, Mat3& gradient);

double l2_norm(const MixedSpace& space, const Eigen::VectorXd& v);
double h1_seminorm(const MixedSpace& space, const Eigen::VectorXd& v);
double h1_norm(const MixedSpace& space, const Eigen::VectorXd& v);

struct FieldError {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1() const;
};
/// Error of a discrete velocity against an exact field (value and gradient).
FieldError velocity_error(const MixedSpace& space, const Eigen::VectorXd& v, const VelocityField& exact);
/// L2 error of a P1 pressure against an exact scalar field.
double pressure_l2_error(const MixedSpace& space, const Eigen::VectorXd& p, const ScalarField& exact);

SparseOperator assemble_mass(const MixedSpace& space);
SparseOperator assemble_stiffness(const MixedSpace& space);
/// M + alpha^2 K; throws ValidationError for alpha == 0.
SparseOperator assemble_a_alpha(const MixedSpace& space, double alpha);
/// B with B(q, z) = integral of q div z; n_pre x n_vel.
SparseOperator assemble_div(const MixedSpace& space);

/// c(u, v, w) = 1/2 [ b(u, v, w) - b(u, w, v) ], b(u, v, w) = int u_i d_i v_j w_j.
double apply_trilinear(const MixedSpace& space, const FeFunction& u, const FeFunction& v, const FeFunction& w);
double apply_trilinear(const MixedSpace& space, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& w);

enum class ConvectionMode {
  state,           ///< w^T N(y) v = c(y, v, w)
  state_jacobian,  ///< w^T L(y) z = c(z, y, w) + c(y, z, w)
  adjoint,         ///< L(y)^T
};
SparseOperator assemble_convection(const MixedSpace& space, const FeFunction& y, ConvectionMode mode);
SparseOperator assemble_convection(const MixedSpace& space, const Eigen::VectorXd& y, ConvectionMode mode);

/// Load vector int f . phi_i for a vector field callback.
Eigen::VectorXd assemble_load(const MixedSpace& space, const std::function<Vec3(const Point&)>& f);

/// E with (E u)_i = int u_h . phi_i for u_h piecewise constant per cell;
/// columns indexed (cell * dim + component).
SparseOperator assemble_cell_load(const MixedSpace& space);

}  // namespace nsv
