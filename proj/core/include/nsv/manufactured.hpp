#pragma once

#include <string>
#include <vector>

#include "nsv/fields.hpp"
#include "nsv/problem.hpp"

namespace nsv {

/// Exact solution triple of the Navier-Stokes-Voigt system on the unit box.
/// The velocity is the (skew) gradient of a separable potential and hence
/// divergence-free; every derivative is evaluated in closed form.
struct ManufacturedCase {
  std::string name;
  int dim = 2;
  double nu = 1.0;
  double alpha = 1.0;
  TimeVelocityField velocity;
  TimeScalarField pressure;
  /// u = y_t - nu Lap y - alpha^2 Lap y_t + (y . grad) y + grad p
  TimeVelocityField forcing;
  /// Pieces of the forcing, exposed for residual checks.
  std::function<Vec3(const Point&, double)> velocity_dt;
  std::function<Vec3(const Point&, double)> laplacian;
  std::function<Vec3(const Point&, double)> laplacian_dt;
  std::function<Vec3(const Point&, double)> pressure_gradient;
};

/// Names accepted by build_case.
std::vector<std::string> case_catalogue();

/// Throws ValidationError for an unknown name.
ManufacturedCase build_case(const std::string& name, double nu, double alpha);

/// Optimal-control data whose discrete adjoint converges to a known field.
/// `state` supplies y and the control u; lambda is a second skew-gradient
/// field, and y_Q, y_T are chosen so that lambda solves the adjoint system
///   -lambda_t - nu Lap lambda + alpha^2 Lap lambda_t - (y . grad) lambda
///     + (grad y)^T lambda + grad q = alpha_Q (y - y_Q),
///   lambda(T) - alpha^2 Lap lambda(T) = alpha_T (y(T) - y_T).
/// The gradient part of the skew convection term is absorbed into q, and
/// lambda(T) = 0 so that y_T = y(T) lies in the divergence-free space.
struct AdjointCase {
  ManufacturedCase state;
  TimeVelocityField adjoint;
  TimeScalarField adjoint_pressure;
  ProblemData data;
};

AdjointCase build_adjoint_case(const std::string& name, double nu, double alpha, double T, double alpha_T,
                               double alpha_Q);

/// Problem data for a forward study of `c`: y0 = y(0), zero targets.
ProblemData state_problem(const ManufacturedCase& c, double T);

}  // namespace nsv
