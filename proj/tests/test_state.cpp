#include <gtest/gtest.h>

#include "nsv/state.hpp"
#include "nsv/verification.hpp"
#include "support.hpp"

using namespace nsv;
using nsv::test::unit_mesh;

namespace {

ProblemData flow_data(double nu = 0.05, double alpha = 0.3, double T = 0.5) {
  ProblemData d;
  d.nu = nu;
  d.alpha = alpha;
  d.T = T;
  d.box = ControlBounds::unbounded(2);
  d.y0 = test::stream_field(20.0);
  return d;
}

Control random_control(const Discretization& disc, std::mt19937& rng, double scale) {
  std::normal_distribution<double> normal;
  Control u = disc.zero_control();
  for (auto& x : u.values()) x = scale * normal(rng);
  return u;
}

}  // namespace

TEST(State, ZeroDataGivesZeroTrajectory) {
  const MixedSpace s(unit_mesh(2, 3));
  ProblemData d;
  d.box = ControlBounds::unbounded(2);
  const Discretization disc(d, s, TimeGrid::uniform(1.0, 3));
  const StateTrajectory y = solve_state(disc, disc.zero_control());
  for (const auto& v : y.velocity) EXPECT_EQ(v.cwiseAbs().maxCoeff(), 0.0);
}

TEST(State, BitwiseDeterministic) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(), s, TimeGrid::uniform(0.5, 4));
  std::mt19937 rng(1);
  const Control u = random_control(disc, rng, 5.0);
  const StateTrajectory a = solve_state(disc, u), b = solve_state(disc, u);
  for (int n = 0; n <= a.steps(); ++n) {
    EXPECT_TRUE(a.velocity[n] == b.velocity[n]);
    if (n > 0) EXPECT_TRUE(a.pressure[n] == b.pressure[n]);
  }
}

TEST(State, StepResidualAndDivergence) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(), s, TimeGrid::uniform(0.5, 4));
  std::mt19937 rng(2);
  const Control u = random_control(disc, rng, 5.0);
  const auto loads = disc.control_loads(u);
  const NewtonOptions opts;
  const StateTrajectory y = solve_state(disc, loads, opts);
  for (int n = 1; n <= y.steps(); ++n) {
    const double r = state_residual(disc, n, y[n - 1], loads[n], y[n], y.pressure[n]);
    const double r0 = y.diagnostics[n].residuals.front();
    EXPECT_LE(r, std::max(opts.abs_tol, opts.rel_tol * r0) * 1.0001);
    EXPECT_LT((disc.div() * y[n]).cwiseAbs().maxCoeff(), 1e-11 * y[n].norm());
  }
}

TEST(State, NewtonConvergesQuadratically) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(0.01), s, TimeGrid::uniform(0.5, 2));
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n_vel()));
  NewtonOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 0.0;
  const StepResult r = newton_step_state(disc, 1, disc.initial_state(), f, opts);
  EXPECT_FALSE(r.diagnostics.used_picard);
  const auto& res = r.diagnostics.residuals;
  ASSERT_GE(res.size(), 4u);
  // best observed order log(r_{k+1}/r_k) / log(r_k/r_{k-1})
  double best = 0.0;
  for (std::size_t k = 1; k + 1 < res.size(); ++k)
    if (res[k + 1] > 1e-15) best = std::max(best, std::log(res[k + 1] / res[k]) / std::log(res[k] / res[k - 1]));
  EXPECT_GT(best, 1.7);
}

TEST(State, PicardReachesSameSolution) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(), s, TimeGrid::uniform(0.5, 2));
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n_vel()));
  NewtonOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const StepResult a = newton_step_state(disc, 1, disc.initial_state(), f, opts);
  const StepResult b = newton_step_state(disc, 1, disc.initial_state(), f, opts, true);
  EXPECT_TRUE(b.diagnostics.used_picard);
  EXPECT_LT((a.velocity - b.velocity).norm(), 1e-10 * a.velocity.norm());
}

TEST(State, EnergyNonIncreasingWithoutForcing) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(0.02, 0.2, 1.0), s, TimeGrid::uniform(1.0, 10));
  const StateTrajectory y = solve_state(disc, disc.zero_control());
  for (int n = 1; n <= y.steps(); ++n)
    EXPECT_LE(voigt_energy(disc, y[n]), voigt_energy(disc, y[n - 1]) * (1.0 + 1e-10));
  EXPECT_LT(voigt_energy(disc, y[y.steps()]), voigt_energy(disc, y[0]));
}

TEST(State, VoigtEnergyMatchesNorms) {
  const MixedSpace s(unit_mesh(2, 3));
  const Discretization disc(flow_data(0.05, 0.4, 1.0), s, TimeGrid::uniform(1.0, 2));
  const Eigen::VectorXd& y = disc.initial_state();
  const double l2 = l2_norm(s, y), h1 = h1_seminorm(s, y);
  EXPECT_NEAR(voigt_energy(disc, y), l2 * l2 + 0.16 * h1 * h1, 1e-12 * voigt_energy(disc, y));
}

TEST(State, LinearizationTaylorRemainder) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(flow_data(), s, TimeGrid::uniform(0.5, 3));
  std::mt19937 rng(4);
  const Control u = random_control(disc, rng, 5.0);
  const Control v = random_control(disc, rng, 5.0);
  NewtonOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-14;
  const StateTrajectory y = solve_state(disc, u, opts);
  const StateTrajectory z = solve_linearized_state(disc, y, v);
  std::vector<double> eps, rem;
  for (double e : {1e-1, 1e-2, 1e-3}) {
    Control ue = u;
    ue.values() += e * v.values();
    const StateTrajectory ye = solve_state(disc, ue, opts);
    double r = 0.0;
    for (int n = 1; n <= y.steps(); ++n) r = std::max(r, (ye[n] - y[n] - e * z[n]).norm());
    eps.push_back(e);
    rem.push_back(r);
  }
  EXPECT_GE(fit_slope(eps, rem), 1.9);
}

TEST(State, InitialStateIsProjection) {
  const MixedSpace s(unit_mesh(2, 3));
  const ProblemData d = flow_data();
  const Discretization disc(d, s, TimeGrid::uniform(0.5, 2));
  const ProjectionContext ctx(s, d.alpha);
  EXPECT_LT((disc.initial_state() - ctx.project_ph(d.y0).velocity).norm(), 1e-13 * disc.initial_state().norm());
}
