#pragma once

#include <vector>

#include "nsv/control.hpp"
#include "nsv/discretization.hpp"

namespace nsv {

/// Newton options for one time step. The residual is the Euclidean norm of
/// the assembled momentum residual on the free velocity dofs.
struct NewtonOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_iterations = 25;
  /// Consecutive non-decreasing residuals before switching to Picard.
  int picard_after = 2;
  int max_picard_iterations = 200;
};

struct StepDiagnostics {
  int step = 0;
  int newton_iterations = 0;
  int picard_iterations = 0;
  bool used_picard = false;
  std::vector<double> residuals;
};

/// Discrete velocities y_{0,h}, ..., y_{N,h} and per-step pressures
/// (index n = 1..N; entry 0 empty). y_sigma(t) = y_n on (t_{n-1}, t_n].
struct StateTrajectory {
  std::vector<Eigen::VectorXd> velocity;
  std::vector<Eigen::VectorXd> pressure;
  std::vector<StepDiagnostics> diagnostics;

  int steps() const noexcept { return static_cast<int>(velocity.size()) - 1; }
  const Eigen::VectorXd& operator[](int n) const { return velocity[n]; }
  /// diagnostics follow the pressure indexing.
  /// Piecewise-constant evaluation with the left-open convention.
  const Eigen::VectorXd& at(const TimeGrid& grid, double t) const { return velocity[grid.interval_of(t)]; }
};

struct StepResult {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  StepDiagnostics diagnostics;
};

/// A_n(y) = M_alpha / tau_n + nu K + L(y), the Jacobian of step n at y.
SparseOperator step_jacobian(const Discretization& disc, int n, const Eigen::VectorXd& y);

/// Residual norm of step n at (y, p) for previous velocity y_prev and load f.
double state_residual(const Discretization& disc, int n, const Eigen::VectorXd& y_prev, const Eigen::VectorXd& load,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& p);

/// One Newton update from y_guess; throws SolverError when the Jacobian is
/// singular.
StepResult newton_update(const Discretization& disc, int n, const Eigen::VectorXd& y_prev, const Eigen::VectorXd& load,
                         const Eigen::VectorXd& y_guess);

/// Solves step n to tolerance, warm-started from y_prev. Falls back to Picard
/// (frozen convection) after repeated non-decrease or a singular Jacobian.
/// Set `force_picard` to skip Newton entirely.
StepResult newton_step_state(const Discretization& disc, int n, const Eigen::VectorXd& y_prev,
                             const Eigen::VectorXd& load, const NewtonOptions& opts = {}, bool force_picard = false);

/// Full forward march for per-interval loads (index n = 1..N).
StateTrajectory solve_state(const Discretization& disc, const std::vector<Eigen::VectorXd>& loads,
                            const NewtonOptions& opts = {});
StateTrajectory solve_state(const Discretization& disc, const Control& u, const NewtonOptions& opts = {});
StateTrajectory solve_state(const Discretization& disc, const TimeVelocityField& u, const NewtonOptions& opts = {});

/// Linearized march A_n(y_n) z_n = M_alpha z_{n-1} / tau_n + f_n with z_0 = 0.
StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base,
                                       const std::vector<Eigen::VectorXd>& loads);
StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base, const Control& v);

/// Voigt energy |y|^2 + alpha^2 |grad y|^2.
double voigt_energy(const Discretization& disc, const Eigen::VectorXd& y);

}  // namespace nsv
