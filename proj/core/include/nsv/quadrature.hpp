#pragma once

#include <array>
#include <vector>

namespace nsv {

/// Quadrature rule on the reference simplex in barycentric coordinates.
/// Weights sum to one, so physical weights are weight * |T|.
struct QuadratureRule {
  int dim = 2;
  int degree = 0;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Degree-5 rule: the 7-point Radon rule on triangles, a 4x4x4 collapsed
/// Gauss product rule on tetrahedra.
const QuadratureRule& degree5_rule(int dim);

/// Collapsed (Duffy) Gauss-Legendre product rule with n points per
/// direction; exact to degree 2n - dim.
QuadratureRule collapsed_gauss_rule(int dim, int n);

}  // namespace nsv
