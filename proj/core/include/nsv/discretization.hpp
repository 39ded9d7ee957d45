#pragma once

#include <memory>
#include <vector>

#include "nsv/control.hpp"
#include "nsv/fem.hpp"
#include "nsv/problem.hpp"
#include "nsv/projections.hpp"
#include "nsv/time_grid.hpp"

namespace nsv {

/// Everything that stays fixed while the control varies: the assembled
/// operators, the projected initial state and terminal target, and the
/// per-interval target loads. The space must outlive this object.
class Discretization {
 public:
  Discretization(const ProblemData& data, const MixedSpace& space, const TimeGrid& grid);

  const ProblemData& data() const noexcept { return data_; }
  const MixedSpace& space() const noexcept { return *space_; }
  const TimeGrid& grid() const noexcept { return grid_; }

  const SparseOperator& mass() const noexcept { return mass_; }
  const SparseOperator& stiffness() const noexcept { return stiffness_; }
  /// M + alpha^2 K
  const SparseOperator& a_alpha() const noexcept { return projections_->a_alpha(); }
  const SparseOperator& div() const noexcept { return projections_->div(); }
  /// Piecewise-constant control to load vector map.
  const SparseOperator& cell_load() const noexcept { return cell_load_; }
  const ProjectionContext& projections() const noexcept { return *projections_; }

  /// y_{0,h} = P_h y_0
  const Eigen::VectorXd& initial_state() const noexcept { return y0_h_; }
  /// y_T^h = P_h y_T
  const Eigen::VectorXd& terminal_target() const noexcept { return yT_h_; }

  /// (1/tau_n) int_{t_{n-1}}^{t_n} (y_Q(t), phi_i) dt, 2-point Gauss in time.
  const Eigen::VectorXd& target_load(int n) const { return target_load_[n]; }
  /// (1/tau_n) int_{t_{n-1}}^{t_n} |y_Q(t)|^2 dt with the same rules.
  double target_norm2(int n) const { return target_norm2_[n]; }

  /// Load vectors (u_n, phi_i) for n = 1..N; entry 0 is unused.
  std::vector<Eigen::VectorXd> control_loads(const Control& u) const;
  std::vector<Eigen::VectorXd> control_loads(const TimeVelocityField& u) const;

  /// Control-shaped vector with entries (1/|K|) int_K lambda_j for the given
  /// per-interval velocities (index n = 1..N).
  Eigen::VectorXd cell_averages(const std::vector<const Eigen::VectorXd*>& per_interval) const;

  Control zero_control(double value = 0.0) const {
    return Control(grid_.steps(), space_->num_cells(), space_->dim(), value);
  }
  const Eigen::VectorXd& control_weights() const noexcept { return weights_; }

 private:
  ProblemData data_;
  const MixedSpace* space_;
  TimeGrid grid_;
  SparseOperator mass_;
  SparseOperator stiffness_;
  SparseOperator cell_load_;
  std::unique_ptr<ProjectionContext> projections_;
  Eigen::VectorXd y0_h_;
  Eigen::VectorXd yT_h_;
  std::vector<Eigen::VectorXd> target_load_;
  std::vector<double> target_norm2_;
  Eigen::VectorXd weights_;
};

/// Nodes and weights of the n-point Gauss rule on [a, b].
void gauss_in_time(double a, double b, int points, std::vector<double>& t, std::vector<double>& w);

}  // namespace nsv
