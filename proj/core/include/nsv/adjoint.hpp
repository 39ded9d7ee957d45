#pragma once

#include <vector>

#include "nsv/state.hpp"

namespace nsv {

/// Discrete adjoint lambda_1, ..., lambda_{N+1} and multipliers. Entry k of
/// `velocity` holds lambda_{k+1}. lambda_sigma(t) = lambda_n on
/// (t_{n-1}, t_n) and lambda_sigma(t_n) = lambda_{n+1}.
struct AdjointTrajectory {
  std::vector<Eigen::VectorXd> velocity;
  std::vector<Eigen::VectorXd> multiplier;

  int steps() const noexcept { return static_cast<int>(velocity.size()) - 1; }
  /// lambda_n for n = 1..N+1.
  const Eigen::VectorXd& lambda(int n) const { return velocity[n - 1]; }
  const Eigen::VectorXd& pressure(int n) const { return multiplier[n - 1]; }
};

/// Terminal a_alpha solve followed by the backward march
///   A_n(y_n)^T lambda_n = M_alpha lambda_{n+1} / tau_n + alpha_Q (M y_n - l_Q,n).
AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state);
/// Same with an explicit discrete terminal target.
AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state,
                                const Eigen::VectorXd& yT_h);

struct ObjectiveParts {
  double terminal = 0.0;
  double tracking = 0.0;
  double control = 0.0;
  double total() const noexcept { return terminal + tracking + control; }
};

ObjectiveParts objective_parts(const Discretization& disc, const StateTrajectory& state, const Control& u);
double objective(const Discretization& disc, const StateTrajectory& state, const Control& u);

/// Riesz representative in the weighted control space:
/// g_{n,K,j} = (1/|K|) int_K lambda_{n,j} + gamma u_{n,K,j}.
Control gradient(const Discretization& disc, const AdjointTrajectory& adjoint, const Control& u);

/// alpha_T (y_N - y_T^h, z_N) + alpha_Q sum_n tau_n (M y_n - l_Q,n) . z_n,
/// the tracking side of the duality identity.
double tracking_pairing(const Discretization& disc, const StateTrajectory& state, const StateTrajectory& z);
/// sum_n tau_n f_n . lambda_n, the control side of the duality identity.
double control_pairing(const Discretization& disc, const AdjointTrajectory& adjoint,
                       const std::vector<Eigen::VectorXd>& loads);

}  // namespace nsv
