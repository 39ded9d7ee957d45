#pragma once

#include <vector>

#include "nsv/adjoint.hpp"

namespace nsv {

struct OptimizeOptions {
  /// Stop when ||u - P(u - g)||_{L2(Q)} <= tol.
  double tol = 1e-8;
  /// When positive, additionally require max_i |u_i - P(u_i - g_i)| <= this.
  double pointwise_tol = 0.0;
  int max_iterations = 500;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double initial_step = 1.0;
  double step_min = 1e-6;
  double step_max = 1e3;
  /// Relative rounding allowance in the Armijo test; near stationarity the
  /// predicted decrease drops below the rounding level of J.
  double noise = 1e-14;
  NewtonOptions newton{1e-13, 1e-13, 25, 2, 200};
};

struct OptimizeReport {
  bool converged = false;
  int iterations = 0;
  int state_solves = 0;
  std::vector<double> objective;
  std::vector<double> stationarity;
  std::vector<double> pointwise_stationarity;
  std::vector<double> step;
  std::vector<int> backtracks;
  Control control;
  Control gradient;
  StateTrajectory state;
  AdjointTrajectory adjoint;
};

/// ||u - P_box(u - g)|| in the weighted L2(Q) norm.
double stationarity(const Discretization& disc, const Control& u, const Control& g);
/// max_i |u_i - P_box(u_i - g_i)|.
double pointwise_stationarity(const Discretization& disc, const Control& u, const Control& g);

/// Projected gradient with Armijo backtracking and Barzilai-Borwein steps.
/// u0 is projected onto the box first. State-solve failures propagate as
/// SolverError with the iterate index in the message.
OptimizeReport optimize(const Discretization& disc, const Control& u0, const OptimizeOptions& opts = {});

struct KktAudit {
  double stationarity = 0.0;
  double tolerance = 0.0;
  /// max |g| over entries strictly inside the box.
  double interior_gradient = 0.0;
  /// max of -g at lower-active and g at upper-active entries (<= 0 is ideal).
  double sign_violation = 0.0;
  long active_lower = 0;
  long active_upper = 0;
  long interior = 0;
  bool passed = false;
};

/// Post-hoc first-order check. Pointwise conditions use `pointwise_tol`;
/// stationarity must not exceed `tol`.
KktAudit kkt_audit(const Discretization& disc, const Control& u, const Control& g, double tol, double pointwise_tol);

/// Second derivative J''(u)[v, v] from the linearized state z(v):
/// alpha_T |z_N|^2 + alpha_Q sum tau_n |z_n|^2 + gamma ||v||^2 - 2 sum tau_n c(z_n, z_n, lambda_n).
double hessian_quadratic(const Discretization& disc, const StateTrajectory& state, const AdjointTrajectory& adjoint,
                         const Control& v);

}  // namespace nsv
