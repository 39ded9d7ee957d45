#include "nsv/time_grid.hpp"

#include <algorithm>
#include <string>

#include "nsv/error.hpp"

namespace nsv {

TimeGrid::TimeGrid(std::vector<double> nodes, double rho0) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw ValidationError("time grid needs at least one step");
  if (nodes_.front() != 0.0) throw ValidationError("time grid must start at t = 0");
  double min_tau = 0.0;
  for (std::size_t n = 1; n < nodes_.size(); ++n) {
    const double tau = nodes_[n] - nodes_[n - 1];
    if (!(tau > 0.0)) throw ValidationError("time nodes must be strictly increasing (step " + std::to_string(n) + ")");
    max_tau_ = std::max(max_tau_, tau);
    min_tau = n == 1 ? tau : std::min(min_tau, tau);
  }
  if (!(max_tau_ < rho0 * min_tau))
    throw ValidationError("time grid violates quasi-uniformity: max tau >= rho0 * min tau");
}

TimeGrid TimeGrid::uniform(double T, int steps, double rho0) {
  if (!(T > 0.0)) throw ValidationError("final time must be positive");
  if (steps < 1) throw ValidationError("number of time steps must be >= 1");
  std::vector<double> nodes(steps + 1);
  for (int n = 0; n <= steps; ++n) nodes[n] = T * n / steps;
  nodes[steps] = T;
  return TimeGrid(std::move(nodes), rho0);
}

int TimeGrid::interval_of(double t) const {
  if (t <= 0.0) return 0;
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  if (it == nodes_.end()) return steps();
  return static_cast<int>(it - nodes_.begin());
}

}  // namespace nsv
