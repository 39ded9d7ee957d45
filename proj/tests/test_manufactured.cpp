#include <gtest/gtest.h>

#include "nsv/error.hpp"
#include "nsv/manufactured.hpp"
#include "support.hpp"

using namespace nsv;

namespace {

using VecFn = std::function<Vec3(const Point&, double)>;

Vec3 d_dt(const VecFn& f, const Point& x, double t, double h = 1e-5) {
  return (1.0 / (2 * h)) * (f(x, t + h) - f(x, t - h));
}

Vec3 laplacian(const VecFn& f, const Point& x, double t, int dim, double h = 1e-3) {
  // fourth-order central stencil per axis
  Vec3 r{0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    auto at = [&](double s) {
      Point p = x;
      p[k] += s * h;
      return f(p, t);
    };
    const Vec3 v = (-1.0 / 12) * at(2) + (4.0 / 3) * at(1) + (-5.0 / 2) * f(x, t) + (4.0 / 3) * at(-1) +
                   (-1.0 / 12) * at(-2);
    r = r + (1.0 / (h * h)) * v;
  }
  return r;
}

Mat3 jacobian(const VecFn& f, const Point& x, double t, int dim, double h = 1e-5) {
  Mat3 g{};
  for (int k = 0; k < dim; ++k) {
    Point a = x, b = x;
    a[k] += h;
    b[k] -= h;
    const Vec3 d = (1.0 / (2 * h)) * (f(a, t) - f(b, t));
    for (int j = 0; j < 3; ++j) g[j][k] = d[j];
  }
  return g;
}

Vec3 gradient_of(const TimeScalarField& p, const Point& x, double t, int dim, double h = 1e-5) {
  Vec3 g{0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    Point a = x, b = x;
    a[k] += h;
    b[k] -= h;
    g[k] = (p(a, t) - p(b, t)) / (2 * h);
  }
  return g;
}

std::vector<Point> sample_points(int dim, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<Point> pts(count, Point{0, 0, 0});
  for (auto& p : pts)
    for (int k = 0; k < dim; ++k) p[k] = u(rng);
  return pts;
}

double max_abs(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace

TEST(Manufactured, CatalogueNames) {
  const auto names = case_catalogue();
  EXPECT_EQ(names.size(), 3u);
  for (const auto& n : names) EXPECT_EQ(build_case(n, 1.0, 0.5).name, n);
  EXPECT_THROW(build_case("no-such-case", 1.0, 0.5), ValidationError);
}

TEST(Manufactured, ForcingSatisfiesPdeResidual) {
  for (const auto& name : case_catalogue()) {
    const ManufacturedCase c = build_case(name, 0.7, 0.4);
    const int dim = c.dim;
    const VecFn y = c.velocity.value;
    for (const Point& x : sample_points(dim, 10, 3)) {
      for (double t : {0.1, 0.6}) {
        const Mat3 G = jacobian(y, x, t, dim);
        const Vec3 v = y(x, t);
        Vec3 conv{0, 0, 0};
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < dim; ++k) conv[j] += v[k] * G[j][k];
        const VecFn yt = [&](const Point& p, double s) { return d_dt(y, p, s); };
        const Vec3 expect = d_dt(y, x, t) - c.nu * laplacian(y, x, t, dim) - c.alpha * c.alpha * laplacian(yt, x, t, dim) +
                            conv + gradient_of(c.pressure, x, t, dim);
        const Vec3 f = c.forcing.value(x, t);
        const double scale = std::max(1.0, max_abs(f));
        EXPECT_LT(max_abs(f - expect), 2e-5 * scale) << name << " at t=" << t;
        // the exposed gradient agrees with differentiation
        const Mat3 Ge = c.velocity.gradient(x, t);
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) EXPECT_NEAR(Ge[j][k], G[j][k], 1e-6 * scale);
      }
    }
  }
}

TEST(Manufactured, SolenoidalWithNoSlipBoundary) {
  for (const auto& name : case_catalogue()) {
    const ManufacturedCase c = build_case(name, 1.0, 0.5);
    for (const Point& x : sample_points(c.dim, 10, 9)) {
      const Mat3 g = c.velocity.gradient(x, 0.3);
      double div = 0.0;
      for (int k = 0; k < c.dim; ++k) div += g[k][k];
      EXPECT_LT(std::abs(div), 1e-10 * std::max(1.0, std::abs(g[0][0])));
      for (int k = 0; k < c.dim; ++k)
        for (double side : {0.0, 1.0}) {
          Point b = x;
          b[k] = side;
          EXPECT_LT(max_abs(c.velocity.value(b, 0.3)), 1e-12) << name;
        }
    }
  }
}

TEST(Manufactured, AdjointCaseSatisfiesBackwardSystem) {
  const double nu = 0.8, alpha = 0.5, T = 1.0, aT = 1.0, aQ = 2.0;
  for (const auto& name : {std::string("poly-sin"), std::string("vector-potential-3d")}) {
    const AdjointCase a = build_adjoint_case(name, nu, alpha, T, aT, aQ);
    const int dim = a.state.dim;
    const VecFn lam = a.adjoint.value;
    const VecFn y = a.state.velocity.value;
    for (const Point& x : sample_points(dim, 6, 5)) {
      for (double t : {0.2, 0.7}) {
        const Mat3 Gl = jacobian(lam, x, t, dim), Gy = jacobian(y, x, t, dim);
        const Vec3 l = lam(x, t), v = y(x, t);
        Vec3 conv{0, 0, 0}, transport{0, 0, 0};
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            conv[j] += v[k] * Gl[j][k];
            transport[j] += Gy[k][j] * l[k];
          }
        const VecFn lt = [&](const Point& p, double s) { return d_dt(lam, p, s); };
        const Vec3 lhs = (-1.0) * d_dt(lam, x, t) - nu * laplacian(lam, x, t, dim) + alpha * alpha * laplacian(lt, x, t, dim) -
                         conv + transport + gradient_of(a.adjoint_pressure, x, t, dim);
        const Vec3 rhs = aQ * (v - a.data.yQ.value(x, t));
        EXPECT_LT(max_abs(lhs - rhs), 2e-5 * std::max(1.0, max_abs(rhs))) << name;
      }
      EXPECT_LT(max_abs(lam(x, T)), 1e-12);
      EXPECT_LT(max_abs(a.data.yT.value(x) - y(x, T)), 1e-12);
    }
  }
  EXPECT_THROW(build_adjoint_case("poly-sin", nu, alpha, T, 0.0, 1.0), ValidationError);
}
