#pragma once

#include <Eigen/Dense>

#include "nsv/fields.hpp"
#include "nsv/mesh.hpp"
#include "nsv/problem.hpp"
#include "nsv/time_grid.hpp"

namespace nsv {

/// Piecewise-constant control on (time interval x cell) pairs.
///
/// values are stored flat with index ((n - 1) * cells + K) * dim + j for
/// interval n = 1..N, cell K and component j.
class Control {
 public:
  Control() = default;
  Control(int intervals, std::size_t cells, int dim, double value = 0.0);
  Control(int intervals, std::size_t cells, int dim, Eigen::VectorXd values);

  int intervals() const noexcept { return intervals_; }
  std::size_t cells() const noexcept { return cells_; }
  int dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return values_.size(); }

  std::size_t index(int n, std::size_t cell, int j) const {
    return ((static_cast<std::size_t>(n) - 1) * cells_ + cell) * dim_ + j;
  }
  double& operator()(int n, std::size_t cell, int j) { return values_[static_cast<Eigen::Index>(index(n, cell, j))]; }
  double operator()(int n, std::size_t cell, int j) const { return values_[static_cast<Eigen::Index>(index(n, cell, j))]; }

  Eigen::VectorXd& values() noexcept { return values_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  /// Coefficients of interval n as a (cells * dim) vector.
  Eigen::VectorXd interval(int n) const { return values_.segment(static_cast<Eigen::Index>(index(n, 0, 0)), cells_ * dim_); }

  bool same_shape(const Control& other) const {
    return intervals_ == other.intervals_ && cells_ == other.cells_ && dim_ == other.dim_;
  }

 private:
  int intervals_ = 0;
  std::size_t cells_ = 0;
  int dim_ = 0;
  Eigen::VectorXd values_;
};

/// L2(Q) weights tau_n |K| per control coefficient.
Eigen::VectorXd control_weights(const Mesh& mesh, const TimeGrid& grid);
double control_inner(const Eigen::VectorXd& weights, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Componentwise clamp into the box; infinite bounds leave that side free.
Control project_box(const Control& u, const ControlBounds& box);
bool is_admissible(const Control& u, const ControlBounds& box);

/// Space-time callback of the piecewise-constant control. Points on shared
/// faces resolve to the first containing cell; times follow (t_{n-1}, t_n].
TimeVelocityField embed_control(const Control& u, const Mesh& mesh, const TimeGrid& grid);

}  // namespace nsv
