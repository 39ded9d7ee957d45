#include "nsv/state.hpp"

#include <cmath>

#include "nsv/error.hpp"
#include "nsv/saddle.hpp"

namespace nsv {

namespace {

SparseOperator base_block(const Discretization& disc, int n) {
  const double tau = disc.grid().tau(n);
  SparseOperator a = (1.0 / tau) * disc.a_alpha() + disc.data().nu * disc.stiffness();
  return a;
}

double free_norm(const MixedSpace& space, const Eigen::VectorXd& r) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (!space.is_dirichlet(static_cast<std::size_t>(i))) s += r[i] * r[i];
  return std::sqrt(s);
}

// F(y) + B^T p with N(y) y = L(y) y / 2.
Eigen::VectorXd residual_vector(const Discretization& disc, int n, const Eigen::VectorXd& y_prev,
                                const Eigen::VectorXd& load, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                                const SparseOperator& jac_conv) {
  const double tau = disc.grid().tau(n);
  Eigen::VectorXd r = disc.a_alpha() * (y - y_prev) / tau + disc.data().nu * (disc.stiffness() * y) +
                      0.5 * (jac_conv * y) - load;
  if (p.size() > 0) r += disc.div().transpose() * p;
  return r;
}

}  // namespace

SparseOperator step_jacobian(const Discretization& disc, int n, const Eigen::VectorXd& y) {
  SparseOperator a = base_block(disc, n);
  a += assemble_convection(disc.space(), y, ConvectionMode::state_jacobian);
  return a;
}

double state_residual(const Discretization& disc, int n, const Eigen::VectorXd& y_prev, const Eigen::VectorXd& load,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
  const auto l = assemble_convection(disc.space(), y, ConvectionMode::state_jacobian);
  return free_norm(disc.space(), residual_vector(disc, n, y_prev, load, y, p, l));
}

StepResult newton_update(const Discretization& disc, int n, const Eigen::VectorXd& y_prev, const Eigen::VectorXd& load,
                         const Eigen::VectorXd& y_guess) {
  const auto l = assemble_convection(disc.space(), y_guess, ConvectionMode::state_jacobian);
  SparseOperator jac = base_block(disc, n) + l;
  // J y - F(y) = N(y) y + M_alpha y_prev / tau + f
  const Eigen::VectorXd rhs = 0.5 * (l * y_guess) + disc.a_alpha() * y_prev / disc.grid().tau(n) + load;
  SaddlePointSolver solver(disc.space(), jac, disc.div());
  auto sol = solver.solve(rhs);
  StepResult out;
  out.velocity = std::move(sol.velocity);
  out.pressure = std::move(sol.pressure);
  out.diagnostics.step = n;
  out.diagnostics.newton_iterations = 1;
  return out;
}

StepResult newton_step_state(const Discretization& disc, int n, const Eigen::VectorXd& y_prev,
                             const Eigen::VectorXd& load, const NewtonOptions& opts, bool force_picard) {
  const auto& space = disc.space();
  const double tau = disc.grid().tau(n);
  const SparseOperator base = base_block(disc, n);
  const Eigen::VectorXd rhs_const = disc.a_alpha() * y_prev / tau + load;

  StepResult out;
  out.diagnostics.step = n;
  out.diagnostics.used_picard = force_picard;
  Eigen::VectorXd y = y_prev;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_pre()));
  auto& hist = out.diagnostics.residuals;

  bool picard = force_picard;
  int failures = 0;
  double r0 = -1.0;
  for (;;) {
    const auto l = assemble_convection(space, y, ConvectionMode::state_jacobian);
    const double r = free_norm(space, residual_vector(disc, n, y_prev, load, y, p, l));
    if (!std::isfinite(r)) throw SolverError("residual is not finite", n, hist);
    if (r0 < 0.0) r0 = r;
    if (!hist.empty() && r >= hist.back()) ++failures;
    else failures = 0;
    hist.push_back(r);
    if (r <= std::max(opts.abs_tol, opts.rel_tol * r0)) break;
    if (!picard && failures >= opts.picard_after) picard = true;

    if (!picard) {
      if (out.diagnostics.newton_iterations >= opts.max_iterations) {
        picard = true;
      } else {
        try {
          SaddlePointSolver solver(space, base + l, disc.div());
          auto sol = solver.solve(0.5 * (l * y) + rhs_const);
          y = std::move(sol.velocity);
          p = std::move(sol.pressure);
          ++out.diagnostics.newton_iterations;
          continue;
        } catch (const SolverError&) {
          picard = true;
        }
      }
    }
    if (out.diagnostics.picard_iterations >= opts.max_picard_iterations)
      throw SolverError("nonlinear solver did not converge", n, hist);
    out.diagnostics.used_picard = true;
    SparseOperator a = base + assemble_convection(space, y, ConvectionMode::state);
    SaddlePointSolver solver(space, a, disc.div());
    auto sol = solver.solve(rhs_const);
    y = std::move(sol.velocity);
    p = std::move(sol.pressure);
    failures = 0;
    ++out.diagnostics.picard_iterations;
  }
  out.velocity = std::move(y);
  out.pressure = std::move(p);
  return out;
}

StateTrajectory solve_state(const Discretization& disc, const std::vector<Eigen::VectorXd>& loads,
                            const NewtonOptions& opts) {
  const int steps = disc.grid().steps();
  if (static_cast<int>(loads.size()) != steps + 1) throw ValidationError("expected one load per time interval");
  StateTrajectory traj;
  traj.velocity.reserve(steps + 1);
  traj.velocity.push_back(disc.initial_state());
  traj.pressure.resize(1);
  traj.diagnostics.resize(1);
  for (int n = 1; n <= steps; ++n) {
    auto step = newton_step_state(disc, n, traj.velocity.back(), loads[n], opts);
    traj.velocity.push_back(std::move(step.velocity));
    traj.pressure.push_back(std::move(step.pressure));
    traj.diagnostics.push_back(std::move(step.diagnostics));
  }
  return traj;
}

StateTrajectory solve_state(const Discretization& disc, const Control& u, const NewtonOptions& opts) {
  return solve_state(disc, disc.control_loads(u), opts);
}

StateTrajectory solve_state(const Discretization& disc, const TimeVelocityField& u, const NewtonOptions& opts) {
  return solve_state(disc, disc.control_loads(u), opts);
}

StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base,
                                       const std::vector<Eigen::VectorXd>& loads) {
  const int steps = disc.grid().steps();
  if (base.steps() != steps || static_cast<int>(loads.size()) != steps + 1)
    throw ValidationError("linearized state: inconsistent step counts");
  StateTrajectory z;
  z.velocity.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.space().n_vel())));
  z.pressure.resize(1);
  z.diagnostics.resize(1);
  for (int n = 1; n <= steps; ++n) {
    SaddlePointSolver solver(disc.space(), step_jacobian(disc, n, base.velocity[n]), disc.div());
    auto sol = solver.solve(disc.a_alpha() * z.velocity.back() / disc.grid().tau(n) + loads[n]);
    z.velocity.push_back(std::move(sol.velocity));
    z.pressure.push_back(std::move(sol.pressure));
    StepDiagnostics d;
    d.step = n;
    z.diagnostics.push_back(d);
  }
  return z;
}

StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base, const Control& v) {
  return solve_linearized_state(disc, base, disc.control_loads(v));
}

double voigt_energy(const Discretization& disc, const Eigen::VectorXd& y) { return y.dot(disc.a_alpha() * y); }

}  // namespace nsv
