#include <gtest/gtest.h>

#include <sstream>

#include "nsv/error.hpp"
#include "nsv/verification.hpp"
#include "support.hpp"

using namespace nsv;
using nsv::test::unit_mesh;

namespace {

RateTable power_table(double p) {
  RateTable t;
  t.norms = {"a", "b"};
  for (int l = 0; l < 4; ++l) {
    const double h = std::pow(0.5, l);
    t.rows.push_back({l, h, h * h, {3.0 * std::pow(h, p), 2.0 * std::pow(h, 0.5)}});
  }
  return t;
}

}  // namespace

TEST(Rates, FitSlopeOfPowerLaw) {
  const std::vector<double> x{1.0, 0.5, 0.25, 0.125}, y{3.0, 3.0 * std::pow(0.5, 1.7), 3.0 * std::pow(0.25, 1.7),
                                                       3.0 * std::pow(0.125, 1.7)};
  EXPECT_NEAR(fit_slope(x, y), 1.7, 1e-13);
}

TEST(Rates, TableFitsAndSummaryFormat) {
  RateTable t = power_table(1.0);
  t.fit("h", 0.9);
  ASSERT_EQ(t.fits.size(), 2u);
  EXPECT_NEAR(t.slope("a").slope, 1.0, 1e-13);
  EXPECT_TRUE(t.slope("a").pass);
  EXPECT_TRUE(t.slope("a").stable);
  EXPECT_FALSE(t.slope("b").pass);
  EXPECT_FALSE(t.all_pass());
  EXPECT_EQ(t.summary(), "norm=a slope=1.000 threshold=0.900 PASS\nnorm=b slope=0.500 threshold=0.900 FAIL\n");
  t.fit("tau", 0.45);
  EXPECT_NEAR(t.slope("a").slope, 0.5, 1e-13);
  EXPECT_NEAR(t.slope("b").slope, 0.25, 1e-13);
  EXPECT_TRUE(t.slope("a").pass);
}

TEST(Rates, CsvLayout) {
  RateTable t = power_table(2.0);
  t.fit("h", 0.9);
  std::ostringstream out;
  t.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "level,h,tau,a,b");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,1,3,2");
  int slopes = 0;
  while (std::getline(in, line)) slopes += line.rfind("slope,", 0) == 0;
  EXPECT_EQ(slopes, 2);
}

TEST(Rates, TooFewLevelsRejected) {
  RateTable t = power_table(1.0);
  t.rows.resize(2);
  EXPECT_THROW(t.fit("h", 0.9), ValidationError);
  StudyConfig c;
  c.levels = 2;
  EXPECT_THROW(c.validate(), ValidationError);
  c.levels = 3;
  EXPECT_NO_THROW(c.validate());
  c.case_name = "nope";
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Errors, PiecewiseConstantOfLinearInTime) {
  // y(t) = t q with q = (x^2, xy); y_n = t_n q is exact at nodes, lags by tau on the left.
  const MixedSpace s(unit_mesh(2, 2));
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  VelocityField q;
  q.value = [](const Point& p) { return Vec3{p[0] * p[0], p[0] * p[1], 0}; };
  TimeVelocityField y;
  y.value = [&](const Point& p, double t) { return t * q.value(p); };
  y.gradient = [](const Point& p, double t) {
    Mat3 g{};
    g[0] = {2 * t * p[0], 0, 0};
    g[1] = {t * p[1], t * p[0], 0};
    return g;
  };
  const Eigen::VectorXd qh = interpolate(s, q.value);
  StateTrajectory traj;
  for (int n = 0; n <= 4; ++n) traj.velocity.push_back(grid.node(n) * qh);
  const TrajectoryErrors e = state_errors(s, grid, traj, y);
  const double qnorm = std::sqrt(1.0 / 5 + 1.0 / 9 + 2.0);
  const double tau = 0.25;
  EXPECT_LT(e.nodal_max_h1, 1e-13);
  EXPECT_NEAR(e.linf_h1, tau * qnorm, 1e-12);
  EXPECT_NEAR(e.l2_h1, tau * std::sqrt(1.0 / 3.0) * qnorm, 1e-12);
}

TEST(Errors, ControlDifferenceOnNestedHierarchy) {
  const Mesh coarse = build_structured(Box::unit(2), 2);
  const Mesh fine = refine_uniform(coarse);
  const Mesh* chain[] = {&coarse, &fine};
  const auto anc = ancestor_map(chain);
  const TimeGrid fine_grid = TimeGrid::uniform(2.0, 8);
  Control c(4, coarse.num_cells(), 2, 1.0), f(8, fine.num_cells(), 2, 1.0);
  EXPECT_EQ(control_difference(c, f, anc, fine, fine_grid), 0.0);
  f.values().setConstant(0.25);
  // |1 - 0.25| sqrt(T |Omega| dim)
  EXPECT_NEAR(control_difference(c, f, anc, fine, fine_grid), 0.75 * std::sqrt(2.0 * 2.0), 1e-13);
  // a coarse interval covers two fine intervals: change one coarse entry
  Control c2 = c;
  c2(2, 0, 1) = 3.0;
  f.values().setConstant(1.0);
  EXPECT_NEAR(control_difference(c2, f, anc, fine, fine_grid), 2.0 * std::sqrt(0.5 * coarse.volume(0)), 1e-13);
}

TEST(Study, StateStudyShowsFirstOrderTrend) {
  StudyConfig c;
  c.kind = "state";
  c.levels = 3;
  c.base_n = 2;
  c.base_steps = 1;
  c.coupling = Coupling::tau_h2;
  const RateTable t = run_convergence(c);
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_NEAR(t.rows[i].h, 0.5 * t.rows[i - 1].h, 1e-14);
    EXPECT_NEAR(t.rows[i].tau, 0.25 * t.rows[i - 1].tau, 1e-14);
    for (std::size_t k = 0; k < t.norms.size(); ++k) EXPECT_LT(t.rows[i].errors[k], t.rows[i - 1].errors[k]);
  }
}
