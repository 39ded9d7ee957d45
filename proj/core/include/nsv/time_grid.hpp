#pragma once

#include <vector>

namespace nsv {

/// Partition 0 = t_0 < t_1 < ... < t_N = T with steps tau_n = t_n - t_{n-1}.
/// Enforces the quasi-uniformity bound max tau < rho0 * tau_n for all n.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> nodes, double rho0 = 2.0);
  static TimeGrid uniform(double T, int steps, double rho0 = 2.0);

  int steps() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  double T() const noexcept { return nodes_.back(); }
  double node(int n) const { return nodes_[n]; }
  /// tau_n for n = 1..N.
  double tau(int n) const { return nodes_[n] - nodes_[n - 1]; }
  double max_tau() const noexcept { return max_tau_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Interval index n with t in (t_{n-1}, t_n]; 0 for t = 0.
  int interval_of(double t) const;

 private:
  std::vector<double> nodes_;
  double max_tau_ = 0.0;
};

}  // namespace nsv
