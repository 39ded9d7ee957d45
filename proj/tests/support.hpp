#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "nsv/fem.hpp"

namespace nsv::test {

inline std::shared_ptr<const Mesh> unit_mesh(int dim, int n) {
  return std::make_shared<const Mesh>(build_structured(Box::unit(dim), n));
}

/// Random coefficients with homogeneous Dirichlet rows zeroed.
inline Eigen::VectorXd random_velocity(const MixedSpace& space, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(space.n_vel()));
  for (auto& x : v) x = scale * normal(rng);
  zero_dirichlet(space, v);
  return v;
}

/// Divergence-free field vanishing on the boundary of the unit square:
/// the curl of (x(1-x)y(1-y))^2.
inline VelocityField stream_field(double scale = 1.0) {
  VelocityField f;
  f.value = [scale](const Point& p) {
    const double x = p[0], y = p[1];
    const double X = x * x * (1 - x) * (1 - x), Y = y * y * (1 - y) * (1 - y);
    const double dX = 2 * x * (1 - x) * (1 - 2 * x), dY = 2 * y * (1 - y) * (1 - 2 * y);
    return Vec3{scale * X * dY, -scale * dX * Y, 0.0};
  };
  f.gradient = [scale](const Point& p) {
    const double x = p[0], y = p[1];
    const double X = x * x * (1 - x) * (1 - x), Y = y * y * (1 - y) * (1 - y);
    const double dX = 2 * x * (1 - x) * (1 - 2 * x), dY = 2 * y * (1 - y) * (1 - 2 * y);
    const double ddX = 2 - 12 * x + 12 * x * x, ddY = 2 - 12 * y + 12 * y * y;
    Mat3 g{};
    g[0][0] = scale * dX * dY;
    g[0][1] = scale * X * ddY;
    g[1][0] = -scale * ddX * Y;
    g[1][1] = -scale * dX * dY;
    return g;
  };
  return f;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace nsv::test
