#include "nsv/control.hpp"

#include <algorithm>
#include <memory>

#include "nsv/error.hpp"

namespace nsv {

Control::Control(int intervals, std::size_t cells, int dim, double value)
    : intervals_(intervals),
      cells_(cells),
      dim_(dim),
      values_(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(intervals * cells * dim), value)) {}

Control::Control(int intervals, std::size_t cells, int dim, Eigen::VectorXd values)
    : intervals_(intervals), cells_(cells), dim_(dim), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(intervals * cells * dim))
    throw ValidationError("control coefficient vector has wrong length");
}

Eigen::VectorXd control_weights(const Mesh& mesh, const TimeGrid& grid) {
  const int d = mesh.dim();
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.steps() * mesh.num_cells() * d));
  Eigen::Index k = 0;
  for (int n = 1; n <= grid.steps(); ++n)
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
      for (int j = 0; j < d; ++j) w[k++] = grid.tau(n) * mesh.volume(c);
  return w;
}

double control_inner(const Eigen::VectorXd& weights, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return (weights.array() * u.array() * v.array()).sum();
}

Control project_box(const Control& u, const ControlBounds& box) {
  box.validate(u.dim());
  Control out = u;
  auto& v = out.values();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int j = static_cast<int>(i % u.dim());
    v[i] = std::clamp(v[i], box.lower[j], box.upper[j]);
  }
  return out;
}

bool is_admissible(const Control& u, const ControlBounds& box) {
  const auto& v = u.values();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!box.contains(static_cast<int>(i % u.dim()), v[i])) return false;
  return true;
}

TimeVelocityField embed_control(const Control& u, const Mesh& mesh, const TimeGrid& grid) {
  if (u.cells() != mesh.num_cells() || u.intervals() != grid.steps() || u.dim() != mesh.dim())
    throw ValidationError("control shape does not match mesh and time grid");
  auto shared = std::make_shared<const Control>(u);
  TimeVelocityField f;
  f.value = [shared, &mesh, grid](const Point& x, double t) {
    const long cell = mesh.locate(x);
    Vec3 out{0.0, 0.0, 0.0};
    if (cell < 0) return out;
    const int n = std::max(1, grid.interval_of(t));
    for (int j = 0; j < shared->dim(); ++j) out[j] = (*shared)(n, static_cast<std::size_t>(cell), j);
    return out;
  };
  f.gradient = [](const Point&, double) { return Mat3{}; };
  return f;
}

}  // namespace nsv
