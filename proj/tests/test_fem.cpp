#include <gtest/gtest.h>

#include "nsv/error.hpp"
#include "support.hpp"

using namespace nsv;
using nsv::test::unit_mesh;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Integral of prod lambda_i^{k_i} over a simplex of unit volume.
double monomial_integral(int dim, const std::array<int, 4>& k) {
  double num = factorial(dim);
  int sum = 0;
  for (int i = 0; i <= dim; ++i) {
    num *= factorial(k[i]);
    sum += k[i];
  }
  return num / factorial(sum + dim);
}

Eigen::VectorXd field(const MixedSpace& s, std::function<Vec3(const Point&)> f) { return interpolate(s, f); }

}  // namespace

TEST(Quadrature, ExactForDegreeFive) {
  for (int dim : {2, 3}) {
    const QuadratureRule& r = degree5_rule(dim);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-15);
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; a + b <= 5; ++b)
        for (int c = 0; a + b + c <= 5; ++c)
          for (int d = 0; a + b + c + d <= 5; ++d) {
            if (dim == 2 && d > 0) continue;
            const std::array<int, 4> k{a, b, c, d};
            double q = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
              double m = 1.0;
              for (int j = 0; j <= dim; ++j) m *= std::pow(r.points[i][j], k[j]);
              q += r.weights[i] * m;
            }
            EXPECT_NEAR(q, monomial_integral(dim, k), 1e-15) << dim << "D " << a << b << c << d;
          }
  }
}

TEST(Quadrature, GaussLegendreOnUnitInterval) {
  std::vector<double> x, w;
  gauss_legendre(3, x, w);
  for (int p = 0; p <= 5; ++p) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(q, 1.0 / (p + 1), 1e-15);
  }
}

TEST(P2Basis, NodalAndPartitionOfUnity) {
  for (int dim : {2, 3}) {
    const int npc = dim == 2 ? 6 : 10;
    const int nv = dim + 1;
    std::vector<std::array<double, 4>> nodes;
    for (int i = 0; i < nv; ++i) {
      std::array<double, 4> l{0, 0, 0, 0};
      l[i] = 1.0;
      nodes.push_back(l);
    }
    for (int i = 0; i < nv; ++i)
      for (int j = i + 1; j < nv; ++j) {
        std::array<double, 4> l{0, 0, 0, 0};
        l[i] = l[j] = 0.5;
        nodes.push_back(l);
      }
    for (int a = 0; a < npc; ++a)
      for (int b = 0; b < npc; ++b) EXPECT_NEAR(p2_basis(dim, a, nodes[b]), a == b ? 1.0 : 0.0, 1e-15);
    const std::array<double, 4> l = dim == 2 ? std::array<double, 4>{0.2, 0.3, 0.5, 0} : std::array<double, 4>{0.1, 0.2, 0.3, 0.4};
    double s = 0.0;
    for (int a = 0; a < npc; ++a) s += p2_basis(dim, a, l);
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
}

TEST(Space, DofCounts) {
  const MixedSpace s2(unit_mesh(2, 3));
  // vertices + edges = 16 + 33
  EXPECT_EQ(s2.num_nodes(), 49u);
  EXPECT_EQ(s2.n_vel(), 98u);
  EXPECT_EQ(s2.n_pre(), 16u);
  const MixedSpace s3(unit_mesh(3, 2));
  EXPECT_EQ(s3.num_nodes(), 125u);  // the P2 nodes of a 2x2x2 Kuhn mesh form a 5^3 lattice
  std::size_t fixed = 0;
  for (char m : s2.dirichlet_mask()) fixed += m;
  EXPECT_EQ(fixed, 2u * 24u);  // 12 boundary edges + 12 boundary vertices, two components
  EXPECT_NEAR(s2.pressure_mean_weights().sum(), 1.0, 1e-14);
}

TEST(Assembly, MassOfConstant) {
  for (int dim : {2, 3}) {
    const MixedSpace s(unit_mesh(dim, 2));
    const Vec3 c{1.5, -2.0, dim == 3 ? 0.5 : 0.0};
    const Eigen::VectorXd v = field(s, [&](const Point&) { return c; });
    EXPECT_NEAR(v.dot(assemble_mass(s) * v), dot(c, c), 1e-13);
    EXPECT_LT((assemble_stiffness(s) * v).norm(), 1e-12);
  }
}

TEST(Assembly, QuadraticFieldIntegrals) {
  const MixedSpace s(unit_mesh(2, 3));
  // q = (x^2, xy): |q|^2 = x^4 + x^2 y^2, |grad q|^2 = 4x^2 + y^2 + x^2, div q = 3x.
  const Eigen::VectorXd q = field(s, [](const Point& p) { return Vec3{p[0] * p[0], p[0] * p[1], 0}; });
  EXPECT_NEAR(q.dot(assemble_mass(s) * q), 1.0 / 5 + 1.0 / 9, 1e-13);
  EXPECT_NEAR(q.dot(assemble_stiffness(s) * q), 2.0, 1e-13);
  const SparseOperator B = assemble_div(s);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s.n_pre()));
  const Eigen::VectorXd x = interpolate_pressure(s, [](const Point& p) { return p[0]; });
  EXPECT_NEAR(one.dot(B * q), 1.5, 1e-13);
  EXPECT_NEAR(x.dot(B * q), 1.0, 1e-13);
  EXPECT_NEAR(l2_norm(s, q), std::sqrt(1.0 / 5 + 1.0 / 9), 1e-13);
  EXPECT_NEAR(h1_seminorm(s, q), std::sqrt(2.0), 1e-13);

  const MixedSpace s3(unit_mesh(3, 2));
  const Eigen::VectorXd q3 = field(s3, [](const Point& p) { return Vec3{p[0] * p[0], p[1] * p[2], 0}; });
  EXPECT_NEAR(q3.dot(assemble_stiffness(s3) * q3), 2.0, 1e-13);
}

TEST(Assembly, AAlphaIsMassPlusStiffness) {
  const MixedSpace s(unit_mesh(2, 2));
  const double alpha = 0.7;
  const SparseOperator diff = assemble_a_alpha(s, alpha) - assemble_mass(s) - alpha * alpha * assemble_stiffness(s);
  EXPECT_LT(Eigen::MatrixXd(diff).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(assemble_a_alpha(s, 0.0), ValidationError);
}

TEST(Assembly, AAlphaPositiveOnFreeDofs) {
  const MixedSpace s(unit_mesh(2, 2));
  const Eigen::MatrixXd A(assemble_a_alpha(s, 0.1));
  std::vector<int> free;
  for (std::size_t i = 0; i < s.n_vel(); ++i)
    if (!s.is_dirichlet(i)) free.push_back(static_cast<int>(i));
  Eigen::MatrixXd Af(free.size(), free.size());
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) Af(i, j) = A(free[i], free[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Af);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Assembly, LoadsMatchMass) {
  const MixedSpace s(unit_mesh(2, 3));
  const Vec3 c{0.3, -1.1, 0};
  const Eigen::VectorXd f = assemble_load(s, [&](const Point&) { return c; });
  const Eigen::VectorXd v = field(s, [&](const Point&) { return c; });
  EXPECT_LT((f - assemble_mass(s) * v).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::VectorXd u(static_cast<Eigen::Index>(s.num_cells() * 2));
  for (std::size_t k = 0; k < s.num_cells(); ++k) u.segment<2>(2 * k) << c[0], c[1];
  EXPECT_LT((assemble_cell_load(s) * u - f).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Trilinear, HandComputedValues) {
  const MixedSpace s(unit_mesh(2, 2));
  auto F = [&](std::function<Vec3(const Point&)> f) { return field(s, f); };
  // b(u,v,w) = int 2x = 1, b(u,w,v) = 0.
  EXPECT_NEAR(apply_trilinear(s, F([](const Point&) { return Vec3{1, 0, 0}; }),
                              F([](const Point& p) { return Vec3{p[0] * p[0], 0, 0}; }),
                              F([](const Point&) { return Vec3{1, 0, 0}; })),
              0.5, 1e-14);
  // b(u,v,w) = int 2x y^2 = 1/3, b(u,w,v) = 0.
  EXPECT_NEAR(apply_trilinear(s, F([](const Point& p) { return Vec3{p[1], 0, 0}; }),
                              F([](const Point& p) { return Vec3{0, p[0] * p[0], 0}; }),
                              F([](const Point& p) { return Vec3{0, p[1], 0}; })),
              1.0 / 6.0, 1e-14);
}

TEST(Trilinear, SkewIdentities) {
  std::mt19937 rng(7);
  for (int dim : {2, 3}) {
    const MixedSpace s(unit_mesh(dim, 2));
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = test::random_velocity(s, rng), v = test::random_velocity(s, rng), w = test::random_velocity(s, rng);
      const double scale = u.norm() * v.norm() * w.norm();
      EXPECT_LT(std::abs(apply_trilinear(s, u, v, v)), 1e-13 * scale);
      EXPECT_LT(std::abs(apply_trilinear(s, u, v, w) + apply_trilinear(s, u, w, v)), 1e-13 * scale);
    }
  }
}

TEST(Convection, MatricesMatchTrilinearForm) {
  std::mt19937 rng(11);
  for (int dim : {2, 3}) {
    const MixedSpace s(unit_mesh(dim, 2));
    const auto y = test::random_velocity(s, rng), v = test::random_velocity(s, rng), w = test::random_velocity(s, rng);
    const double scale = y.norm() * v.norm() * w.norm();
    const SparseOperator N = assemble_convection(s, y, ConvectionMode::state);
    const SparseOperator L = assemble_convection(s, y, ConvectionMode::state_jacobian);
    const SparseOperator La = assemble_convection(s, y, ConvectionMode::adjoint);
    EXPECT_LT(std::abs(w.dot(N * v) - apply_trilinear(s, y, v, w)), 1e-13 * scale);
    EXPECT_LT(std::abs(w.dot(L * v) - apply_trilinear(s, v, y, w) - apply_trilinear(s, y, v, w)), 1e-13 * scale);
    EXPECT_LT(Eigen::MatrixXd(SparseOperator(La - SparseOperator(L.transpose()))).cwiseAbs().maxCoeff(), 1e-13);
    // L(y) y = 2 N(y) y
    EXPECT_LT((L * y - 2.0 * (N * y)).norm(), 1e-12 * y.norm() * y.norm());
  }
}

TEST(Errors, InterpolantOfQuadraticIsExact) {
  const MixedSpace s(unit_mesh(2, 2));
  VelocityField q;
  q.value = [](const Point& p) { return Vec3{p[0] * p[1], p[1] * p[1] - p[0], 0}; };
  q.gradient = [](const Point& p) {
    Mat3 g{};
    g[0] = {p[1], p[0], 0};
    g[1] = {-1.0, 2 * p[1], 0};
    return g;
  };
  const FieldError e = velocity_error(s, interpolate(s, q.value), q);
  EXPECT_LT(e.l2, 1e-14);
  EXPECT_LT(e.h1_semi, 1e-13);
  const auto p = interpolate_pressure(s, [](const Point& x) { return 2 * x[0] - x[1]; });
  EXPECT_LT(pressure_l2_error(s, p, [](const Point& x) { return 2 * x[0] - x[1]; }), 1e-14);
}
