#pragma once

#include <functional>

#include "nsv/geometry.hpp"

namespace nsv {

using ScalarField = std::function<double(const Point&)>;
using TimeScalarField = std::function<double(const Point&, double)>;

/// Steady vector field with an optional gradient; projections that pair the
/// field with gradients of test functions need the gradient.
struct VelocityField {
  std::function<Vec3(const Point&)> value;
  std::function<Mat3(const Point&)> gradient;

  explicit operator bool() const noexcept { return static_cast<bool>(value); }
};

/// Time-dependent vector field y(x, t).
struct TimeVelocityField {
  std::function<Vec3(const Point&, double)> value;
  std::function<Mat3(const Point&, double)> gradient;

  explicit operator bool() const noexcept { return static_cast<bool>(value); }

  /// Snapshot at time t.
  VelocityField at(double t) const {
    VelocityField f;
    if (value) f.value = [v = value, t](const Point& x) { return v(x, t); };
    if (gradient) f.gradient = [g = gradient, t](const Point& x) { return g(x, t); };
    return f;
  }
};

}  // namespace nsv
