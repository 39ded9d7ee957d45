#include "nsv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsv {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule collapsed_gauss_rule(int dim, int n) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("collapsed_gauss_rule: dim must be 2 or 3");
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = 2 * n - 1 - (dim - 1);
  if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = x[i], v = x[j] * (1.0 - x[i]);
        // Reference triangle area is 1/2; normalize to unit total weight.
        rule.points.push_back({1.0 - u - v, u, v, 0.0});
        rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double u = x[i];
          const double v = x[j] * (1.0 - u);
          const double s = x[k] * (1.0 - x[i]) * (1.0 - x[j]);
          rule.points.push_back({1.0 - u - v - s, u, v, s});
          rule.weights.push_back(6.0 * w[i] * w[j] * w[k] * (1.0 - x[i]) * (1.0 - x[i]) * (1.0 - x[j]));
        }
  }
  return rule;
}

namespace {

QuadratureRule radon7() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
  const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
  const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
  QuadratureRule r;
  r.dim = 2;
  r.degree = 5;
  r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0},
              {b1, a1, a1, 0.0}, {a1, b1, a1, 0.0}, {a1, a1, b1, 0.0},
              {b2, a2, a2, 0.0}, {a2, b2, a2, 0.0}, {a2, a2, b2, 0.0}};
  r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
  return r;
}

}  // namespace

const QuadratureRule& degree5_rule(int dim) {
  static const QuadratureRule tri = radon7();
  static const QuadratureRule tet = [] {
    auto r = collapsed_gauss_rule(3, 4);
    r.degree = 5;
    return r;
  }();
  if (dim == 2) return tri;
  if (dim == 3) return tet;
  throw std::invalid_argument("degree5_rule: dim must be 2 or 3");
}

}  // namespace nsv
