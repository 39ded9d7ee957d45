#include <gtest/gtest.h>

#include <limits>

#include "nsv/error.hpp"
#include "nsv/optimize.hpp"
#include "support.hpp"

using namespace nsv;
using nsv::test::unit_mesh;

namespace {

ProblemData vortex_data(double gamma, double lower, double upper) {
  ProblemData d;
  d.nu = 0.1;
  d.alpha = 0.3;
  d.gamma = gamma;
  d.T = 0.5;
  d.box = ControlBounds::uniform(2, lower, upper);
  d.yQ.value = [](const Point& p, double) {
    const double pi = std::numbers::pi;
    return Vec3{3 * std::sin(pi * p[0]) * std::cos(pi * p[1]), -3 * std::cos(pi * p[0]) * std::sin(pi * p[1]), 0};
  };
  return d;
}

}  // namespace

TEST(Control, BoxProjection) {
  const double inf = std::numeric_limits<double>::infinity();
  ControlBounds box{{-1.0, -inf}, {1.0, 0.5}};
  Control u(1, 2, 2);
  u(1, 0, 0) = -3.0;
  u(1, 0, 1) = -1e300;
  u(1, 1, 0) = 0.25;
  u(1, 1, 1) = 7.0;
  EXPECT_FALSE(is_admissible(u, box));
  const Control p = project_box(u, box);
  EXPECT_EQ(p(1, 0, 0), -1.0);
  EXPECT_EQ(p(1, 0, 1), -1e300);
  EXPECT_EQ(p(1, 1, 0), 0.25);
  EXPECT_EQ(p(1, 1, 1), 0.5);
  EXPECT_TRUE(is_admissible(p, box));
  EXPECT_THROW(ControlBounds::uniform(2, 1.0, -1.0).validate(2), ValidationError);
}

TEST(Control, WeightsAndEmbedding) {
  const auto mesh = unit_mesh(2, 3);
  const TimeGrid grid = TimeGrid::uniform(2.0, 4);
  const Eigen::VectorXd w = control_weights(*mesh, grid);
  EXPECT_NEAR(w.sum(), 2.0 * 1.0 * 2, 1e-14);  // T |Omega| per component
  Control u(4, mesh->num_cells(), 2);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.values()[i] = static_cast<double>(i);
  const TimeVelocityField f = embed_control(u, *mesh, grid);
  for (std::size_t k = 0; k < mesh->num_cells(); k += 5) {
    Point c{0, 0, 0};
    for (int v : mesh->cell(k))
      for (int d = 0; d < 2; ++d) c[d] += mesh->vertices()[v][d] / 3.0;
    EXPECT_EQ(f.value(c, 1.0)[1], u(2, k, 1));  // t = 1 closes interval 2
    EXPECT_EQ(f.value(c, 1.2)[0], u(3, k, 0));
  }
}

TEST(Optimize, TrivialMinimum) {
  const MixedSpace s(unit_mesh(2, 3));
  ProblemData d;
  d.box = ControlBounds::uniform(2, -1.0, 1.0);
  const Discretization disc(d, s, TimeGrid::uniform(1.0, 3));
  const OptimizeReport r = optimize(disc, disc.zero_control(0.3));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.objective.back(), 1e-12);
  EXPECT_LT(r.control.values().cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Optimize, LargeGammaClampsToNearestBound) {
  const MixedSpace s(unit_mesh(2, 3));
  const Discretization disc(vortex_data(1e6, 0.5, 1.0), s, TimeGrid::uniform(0.5, 2));
  const OptimizeReport r = optimize(disc, disc.zero_control(0.8));
  EXPECT_TRUE(r.converged);
  // the gamma term dominates: the minimizer of gamma/2 |u|^2 over [0.5, 1] is 0.5
  EXPECT_LT((r.control.values().array() - 0.5).abs().maxCoeff(), 1e-12);
}

TEST(Optimize, MonotoneFeasibleAndKktClean) {
  const MixedSpace s(unit_mesh(2, 4));
  const Discretization disc(vortex_data(1e-2, -0.5, 0.5), s, TimeGrid::uniform(0.5, 4));
  OptimizeOptions opts;
  opts.pointwise_tol = 1e-8;
  const OptimizeReport r = optimize(disc, disc.zero_control(), opts);
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(is_admissible(r.control, disc.data().box));
  for (std::size_t k = 1; k < r.objective.size(); ++k)
    EXPECT_LE(r.objective[k], r.objective[k - 1] * (1.0 + 1e-13));
  const KktAudit a = kkt_audit(disc, r.control, r.gradient, 1e-8, 1e-8);
  EXPECT_TRUE(a.passed);
  EXPECT_GT(a.active_lower + a.active_upper, 0);
  EXPECT_GT(a.interior, 0);
  EXPECT_LE(a.sign_violation, 1e-8);
  // gradient recomputed from scratch agrees with the reported one
  const Control g = gradient(disc, solve_adjoint(disc, solve_state(disc, r.control, opts.newton)), r.control);
  EXPECT_LT((g.values() - r.gradient.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Optimize, ReportIsDeterministic) {
  const MixedSpace s(unit_mesh(2, 3));
  const Discretization disc(vortex_data(1e-2, -0.5, 0.5), s, TimeGrid::uniform(0.5, 2));
  const OptimizeReport a = optimize(disc, disc.zero_control()), b = optimize(disc, disc.zero_control());
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_TRUE(a.control.values() == b.control.values());
}

TEST(Optimize, StationarityMeasures) {
  const MixedSpace s(unit_mesh(2, 2));
  const Discretization disc(vortex_data(1.0, -1.0, 1.0), s, TimeGrid::uniform(0.5, 2));
  Control u = disc.zero_control(1.0), g = disc.zero_control(-2.0);
  // u - P(u - g) = 1 - P(3) = 0 at the upper bound with g <= 0
  EXPECT_EQ(stationarity(disc, u, g), 0.0);
  g.values().setConstant(0.5);
  // 1 - P(0.5) = 0.5 everywhere; weighted norm sqrt(0.25 * T * |Omega| * dim)
  EXPECT_NEAR(stationarity(disc, u, g), std::sqrt(0.25 * 0.5 * 2), 1e-14);
  EXPECT_EQ(pointwise_stationarity(disc, u, g), 0.5);
}
