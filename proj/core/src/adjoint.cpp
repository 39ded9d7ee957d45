#include "nsv/adjoint.hpp"

#include "nsv/error.hpp"
#include "nsv/saddle.hpp"

namespace nsv {

AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state) {
  return solve_adjoint(disc, state, disc.terminal_target());
}

AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state,
                                const Eigen::VectorXd& yT_h) {
  const int steps = disc.grid().steps();
  if (state.steps() != steps) throw ValidationError("adjoint: state has the wrong number of steps");
  const auto& data = disc.data();
  AdjointTrajectory adj;
  adj.velocity.resize(steps + 1);
  adj.multiplier.resize(steps + 1);

  {
    const SaddlePointSolver terminal(disc.space(), disc.a_alpha(), disc.div());
    auto sol = terminal.solve(data.alpha_T * (disc.mass() * (state.velocity[steps] - yT_h)));
    adj.velocity[steps] = std::move(sol.velocity);
    adj.multiplier[steps] = std::move(sol.pressure);
  }
  for (int n = steps; n >= 1; --n) {
    const SparseOperator at = step_jacobian(disc, n, state.velocity[n]).transpose();
    const SaddlePointSolver solver(disc.space(), at, disc.div());
    Eigen::VectorXd rhs = disc.a_alpha() * adj.velocity[n] / disc.grid().tau(n);
    if (data.alpha_Q != 0.0) rhs += data.alpha_Q * (disc.mass() * state.velocity[n] - disc.target_load(n));
    auto sol = solver.solve(rhs);
    adj.velocity[n - 1] = std::move(sol.velocity);
    adj.multiplier[n - 1] = std::move(sol.pressure);
  }
  return adj;
}

ObjectiveParts objective_parts(const Discretization& disc, const StateTrajectory& state, const Control& u) {
  const auto& data = disc.data();
  const int steps = disc.grid().steps();
  ObjectiveParts j;
  const Eigen::VectorXd d = state.velocity[steps] - disc.terminal_target();
  j.terminal = 0.5 * data.alpha_T * d.dot(disc.mass() * d);
  if (data.alpha_Q != 0.0) {
    double s = 0.0;
    for (int n = 1; n <= steps; ++n) {
      const auto& y = state.velocity[n];
      // Expanded square; equals the quadrature of |y_n - y_Q|^2 because the
      // rule integrates |y_n|^2 exactly.
      s += disc.grid().tau(n) *
           (y.dot(disc.mass() * y) - 2.0 * y.dot(disc.target_load(n)) + disc.target_norm2(n));
    }
    j.tracking = 0.5 * data.alpha_Q * s;
  }
  j.control = 0.5 * data.gamma * control_inner(disc.control_weights(), u.values(), u.values());
  return j;
}

double objective(const Discretization& disc, const StateTrajectory& state, const Control& u) {
  return objective_parts(disc, state, u).total();
}

Control gradient(const Discretization& disc, const AdjointTrajectory& adjoint, const Control& u) {
  const int steps = disc.grid().steps();
  std::vector<const Eigen::VectorXd*> lam(steps + 1, nullptr);
  for (int n = 1; n <= steps; ++n) lam[n] = &adjoint.lambda(n);
  Eigen::VectorXd g = disc.cell_averages(lam) + disc.data().gamma * u.values();
  return Control(u.intervals(), u.cells(), u.dim(), std::move(g));
}

double tracking_pairing(const Discretization& disc, const StateTrajectory& state, const StateTrajectory& z) {
  const auto& data = disc.data();
  const int steps = disc.grid().steps();
  double s = data.alpha_T * (state.velocity[steps] - disc.terminal_target()).dot(disc.mass() * z.velocity[steps]);
  if (data.alpha_Q != 0.0)
    for (int n = 1; n <= steps; ++n)
      s += data.alpha_Q * disc.grid().tau(n) *
           (disc.mass() * state.velocity[n] - disc.target_load(n)).dot(z.velocity[n]);
  return s;
}

double control_pairing(const Discretization& disc, const AdjointTrajectory& adjoint,
                       const std::vector<Eigen::VectorXd>& loads) {
  double s = 0.0;
  for (int n = 1; n <= disc.grid().steps(); ++n) s += disc.grid().tau(n) * loads[n].dot(adjoint.lambda(n));
  return s;
}

}  // namespace nsv
