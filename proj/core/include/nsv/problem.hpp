#pragma once

#include <limits>
#include <vector>

#include "nsv/fields.hpp"

namespace nsv {

/// Componentwise box [lower_j, upper_j]; infinite bounds are allowed.
struct ControlBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static ControlBounds unbounded(int dim);
  static ControlBounds uniform(int dim, double lower, double upper);

  /// Throws ValidationError unless lower_j <= upper_j for every component.
  void validate(int dim) const;
  bool contains(int component, double value) const {
    return value >= lower[component] && value <= upper[component];
  }
};

/// Physical and cost parameters of the tracking problem.
///
///   J = alpha_T/2 |y(T) - y_T|^2 + alpha_Q/2 ||y - y_Q||^2_Q + gamma/2 ||u||^2_Q
///
/// subject to the Navier-Stokes-Voigt equations with viscosity nu and Voigt
/// length scale alpha. Empty callbacks stand for the zero field.
struct ProblemData {
  double nu = 1.0;
  double alpha = 1.0;
  double gamma = 1.0;
  double alpha_T = 1.0;
  double alpha_Q = 1.0;
  double T = 1.0;
  ControlBounds box;
  VelocityField y0;
  VelocityField yT;
  TimeVelocityField yQ;

  /// Throws ValidationError when nu <= 0, alpha == 0, gamma <= 0, a weight is
  /// negative, both weights vanish, T <= 0 or the box is inconsistent.
  void validate(int dim) const;
};

}  // namespace nsv
