#pragma once

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>
#include <memory>

#include "nsv/fem.hpp"

namespace nsv {

/// Symmetric Dirichlet elimination: rows and columns of constrained dofs are
/// zeroed and the diagonal set to one. Returns a copy.
SparseOperator eliminate_dirichlet(const MixedSpace& space, const SparseOperator& a);

/// Factorized Taylor-Hood saddle-point system
///
///   [ A   B^T ] [ u ]   [ f ]
///   [ B   0   ] [ p ] = [ 0 ]
///
/// with Dirichlet rows/columns of A and B eliminated. The pressure is fixed
/// by pinning one dof during the solve and then shifted to zero mean, which
/// keeps the system sparse. Immutable after construction.
class SaddlePointSolver {
 public:
  struct Solution {
    Eigen::VectorXd velocity;
    /// Zero-mean pressure.
    Eigen::VectorXd pressure;
  };

  /// `velocity_block` is A before Dirichlet elimination; throws SolverError
  /// when the factorization fails.
  SaddlePointSolver(const MixedSpace& space, const SparseOperator& velocity_block, const SparseOperator& div);

  /// Dirichlet entries of the right-hand side are ignored (homogeneous data).
  Solution solve(const Eigen::VectorXd& rhs_velocity) const;

  const SparseOperator& matrix() const noexcept { return system_; }

 private:
  const MixedSpace* space_;
  SparseOperator system_;
  std::unique_ptr<Eigen::UmfPackLU<SparseOperator>> lu_;
};

}  // namespace nsv
