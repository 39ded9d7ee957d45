#include "nsv/problem.hpp"

#include <cmath>
#include <string>

#include "nsv/error.hpp"

namespace nsv {

ControlBounds ControlBounds::unbounded(int dim) {
  const double inf = std::numeric_limits<double>::infinity();
  return {std::vector<double>(dim, -inf), std::vector<double>(dim, inf)};
}

ControlBounds ControlBounds::uniform(int dim, double lower, double upper) {
  ControlBounds b{std::vector<double>(dim, lower), std::vector<double>(dim, upper)};
  b.validate(dim);
  return b;
}

void ControlBounds::validate(int dim) const {
  if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim)
    throw ValidationError("box bounds need one entry per velocity component");
  for (int j = 0; j < dim; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) throw ValidationError("box bound is NaN");
    if (lower[j] > upper[j])
      throw ValidationError("infeasible box: lower bound exceeds upper bound for component " + std::to_string(j));
  }
}

void ProblemData::validate(int dim) const {
  if (!(nu > 0.0)) throw ValidationError("viscosity nu must be positive");
  if (alpha == 0.0 || !std::isfinite(alpha)) throw ValidationError("Voigt length scale alpha must be nonzero");
  if (!(gamma > 0.0)) throw ValidationError("control cost gamma must be positive");
  if (alpha_T < 0.0 || alpha_Q < 0.0) throw ValidationError("tracking weights must be non-negative");
  if (alpha_T == 0.0 && alpha_Q == 0.0) throw ValidationError("at least one tracking weight must be positive");
  if (!(T > 0.0)) throw ValidationError("final time T must be positive");
  box.validate(dim);
}

}  // namespace nsv
