#include "nsv/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsv/error.hpp"

namespace nsv {

namespace {

struct Evaluation {
  Control u;
  StateTrajectory state;
  double J = 0.0;
};

Evaluation evaluate(const Discretization& disc, Control u, const OptimizeOptions& opts, int iterate) {
  Evaluation e;
  try {
    e.state = solve_state(disc, u, opts.newton);
  } catch (const SolverError& err) {
    throw SolverError("optimizer iterate " + std::to_string(iterate) + ": " + err.what(), err.step(), err.residuals());
  }
  e.J = objective(disc, e.state, u);
  e.u = std::move(u);
  return e;
}

}  // namespace

namespace {

Eigen::VectorXd projected_residual(const Discretization& disc, const Control& u, const Control& g) {
  Control trial(u.intervals(), u.cells(), u.dim(), u.values() - g.values());
  return u.values() - project_box(trial, disc.data().box).values();
}

}  // namespace

double stationarity(const Discretization& disc, const Control& u, const Control& g) {
  const Eigen::VectorXd r = projected_residual(disc, u, g);
  return std::sqrt(control_inner(disc.control_weights(), r, r));
}

double pointwise_stationarity(const Discretization& disc, const Control& u, const Control& g) {
  const Eigen::VectorXd r = projected_residual(disc, u, g);
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

OptimizeReport optimize(const Discretization& disc, const Control& u0, const OptimizeOptions& opts) {
  const auto& box = disc.data().box;
  const auto& w = disc.control_weights();
  OptimizeReport rep;

  Evaluation cur = evaluate(disc, project_box(u0, box), opts, 0);
  ++rep.state_solves;
  AdjointTrajectory adj = solve_adjoint(disc, cur.state);
  Control g = gradient(disc, adj, cur.u);
  double s = opts.initial_step;

  for (int k = 0;; ++k) {
    const double st = stationarity(disc, cur.u, g);
    const double pst = pointwise_stationarity(disc, cur.u, g);
    rep.objective.push_back(cur.J);
    rep.stationarity.push_back(st);
    rep.pointwise_stationarity.push_back(pst);
    rep.iterations = k;
    if (st <= opts.tol && (opts.pointwise_tol <= 0.0 || pst <= opts.pointwise_tol)) {
      rep.converged = true;
      break;
    }
    if (k >= opts.max_iterations) break;

    int bt = 0;
    bool accepted = false;
    Evaluation trial;
    for (; bt <= opts.max_backtracks; ++bt) {
      Control cand(cur.u.intervals(), cur.u.cells(), cur.u.dim(), cur.u.values() - s * g.values());
      cand = project_box(cand, box);
      const Eigen::VectorXd d = cand.values() - cur.u.values();
      trial = evaluate(disc, std::move(cand), opts, k + 1);
      ++rep.state_solves;
      const double decrease = opts.armijo * control_inner(w, g.values(), d);
      if (trial.J <= cur.J + decrease + opts.noise * std::abs(cur.J)) {
        accepted = true;
        break;
      }
      s *= opts.backtrack;
    }
    if (!accepted) break;
    rep.step.push_back(s);
    rep.backtracks.push_back(bt);

    AdjointTrajectory adj_new = solve_adjoint(disc, trial.state);
    Control g_new = gradient(disc, adj_new, trial.u);
    // BB1: <du, du> / <du, dg>
    const Eigen::VectorXd du = trial.u.values() - cur.u.values();
    const Eigen::VectorXd dg = g_new.values() - g.values();
    const double num = control_inner(w, du, du);
    const double den = control_inner(w, du, dg);
    s = den > 0.0 ? std::clamp(num / den, opts.step_min, opts.step_max) : opts.initial_step;

    cur = std::move(trial);
    adj = std::move(adj_new);
    g = std::move(g_new);
  }

  rep.control = std::move(cur.u);
  rep.state = std::move(cur.state);
  rep.adjoint = std::move(adj);
  rep.gradient = std::move(g);
  return rep;
}

KktAudit kkt_audit(const Discretization& disc, const Control& u, const Control& g, double tol, double pointwise_tol) {
  const auto& box = disc.data().box;
  KktAudit a;
  a.tolerance = pointwise_tol;
  a.stationarity = stationarity(disc, u, g);
  a.sign_violation = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const int j = static_cast<int>(i % u.dim());
    const double ui = u.values()[i], gi = g.values()[i];
    if (ui <= box.lower[j]) {
      ++a.active_lower;
      a.sign_violation = std::max(a.sign_violation, -gi);
    } else if (ui >= box.upper[j]) {
      ++a.active_upper;
      a.sign_violation = std::max(a.sign_violation, gi);
    } else {
      ++a.interior;
      a.interior_gradient = std::max(a.interior_gradient, std::abs(gi));
    }
  }
  if (a.active_lower + a.active_upper == 0) a.sign_violation = 0.0;
  a.passed = a.stationarity <= tol && a.interior_gradient <= pointwise_tol && a.sign_violation <= pointwise_tol;
  return a;
}

double hessian_quadratic(const Discretization& disc, const StateTrajectory& state, const AdjointTrajectory& adjoint,
                         const Control& v) {
  const auto& data = disc.data();
  const int steps = disc.grid().steps();
  const auto z = solve_linearized_state(disc, state, v);
  const auto& M = disc.mass();
  double q = data.alpha_T * z.velocity[steps].dot(M * z.velocity[steps]);
  for (int n = 1; n <= steps; ++n) {
    const double tau = disc.grid().tau(n);
    const auto& zn = z.velocity[n];
    if (data.alpha_Q != 0.0) q += data.alpha_Q * tau * zn.dot(M * zn);
    q -= 2.0 * tau * apply_trilinear(disc.space(), zn, zn, adjoint.lambda(n));
  }
  q += data.gamma * control_inner(disc.control_weights(), v.values(), v.values());
  return q;
}

}  // namespace nsv
