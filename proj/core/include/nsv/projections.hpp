#pragma once

#include <vector>

#include "nsv/fem.hpp"
#include "nsv/saddle.hpp"
#include "nsv/time_grid.hpp"

namespace nsv {

enum class TimeEndpoint { right, left };

struct PressureProjectionDiagnostics {
  double removed_mean = 0.0;
};

/// Elliptic a_alpha projection P_h onto discretely divergence-free P2
/// velocities and the companion pressure projection R_h. Both share one
/// factorized saddle-point system and are immutable after construction.
class ProjectionContext {
 public:
  ProjectionContext(const MixedSpace& space, double alpha);

  const MixedSpace& space() const noexcept { return *space_; }
  double alpha() const noexcept { return alpha_; }
  const SparseOperator& a_alpha() const noexcept { return a_alpha_; }
  const SparseOperator& div() const noexcept { return div_; }

  /// P_h of a discrete velocity.
  FeFunction project_ph(const Eigen::VectorXd& y) const;
  /// P_h of an analytic field; needs value and gradient callbacks.
  FeFunction project_ph(const VelocityField& y) const;
  /// R_h of a scalar field; a nonzero mean is removed first.
  FeFunction project_rh(const ScalarField& p, PressureProjectionDiagnostics* diag = nullptr) const;

  /// right: snapshots n = 0..N are P_h y(t_n).
  /// left:  snapshots n = 1..N+1 (stored at index n-1) are P_h y(t_{n-1}).
  std::vector<FeFunction> project_time(const TimeVelocityField& y, const TimeGrid& grid, TimeEndpoint endpoint) const;

  /// Right-hand side a_alpha(y, phi_i) of an analytic field.
  Eigen::VectorXd a_alpha_load(const VelocityField& y) const;

 private:
  const MixedSpace* space_;
  double alpha_;
  SparseOperator a_alpha_;
  SparseOperator div_;
  SaddlePointSolver solver_;
};

}  // namespace nsv
