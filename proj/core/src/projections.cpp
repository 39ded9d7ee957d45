#include "nsv/projections.hpp"

#include <cmath>

#include "nsv/error.hpp"

namespace nsv {

ProjectionContext::ProjectionContext(const MixedSpace& space, double alpha)
    : space_(&space),
      alpha_(alpha),
      a_alpha_(assemble_a_alpha(space, alpha)),
      div_(assemble_div(space)),
      solver_(space, a_alpha_, div_) {}

FeFunction ProjectionContext::project_ph(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != space_->n_vel()) throw ValidationError("project_ph: length mismatch");
  auto sol = solver_.solve(a_alpha_ * y);
  return {space_, std::move(sol.velocity), std::nullopt};
}

Eigen::VectorXd ProjectionContext::a_alpha_load(const VelocityField& y) const {
  if (!y.value || !y.gradient) throw ValidationError("analytic projection needs value and gradient callbacks");
  const MixedSpace& s = *space_;
  const int d = s.dim();
  const int npc = s.nodes_per_cell();
  const auto& rule = s.rule();
  const double a2 = alpha_ * alpha_;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n_vel()));
  std::vector<Vec3> grads(npc);
  for (std::size_t c = 0; c < s.num_cells(); ++c) {
    const auto nodes = s.cell_nodes(c);
    const double vol = s.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      s.grad_phi(c, q, grads);
      const Point x = s.quad_point(c, q);
      const Vec3 val = y.value(x);
      const Mat3 g = y.gradient(x);
      const double w = rule.weights[q] * vol;
      for (int a = 0; a < npc; ++a)
        for (int j = 0; j < d; ++j) {
          double gg = 0.0;
          for (int k = 0; k < d; ++k) gg += g[j][k] * grads[a][k];
          rhs[s.vel_dof(nodes[a], j)] += w * (val[j] * s.phi(q, a) + a2 * gg);
        }
    }
  }
  return rhs;
}

FeFunction ProjectionContext::project_ph(const VelocityField& y) const {
  auto sol = solver_.solve(a_alpha_load(y));
  return {space_, std::move(sol.velocity), std::nullopt};
}

FeFunction ProjectionContext::project_rh(const ScalarField& p, PressureProjectionDiagnostics* diag) const {
  const MixedSpace& s = *space_;
  const int d = s.dim();
  const int npc = s.nodes_per_cell();
  const auto& rule = s.rule();

  double integral = 0.0;
  for (std::size_t c = 0; c < s.num_cells(); ++c)
    for (std::size_t q = 0; q < rule.size(); ++q) integral += rule.weights[q] * s.geometry(c).volume * p(s.quad_point(c, q));
  const double mean = integral / s.mesh().total_volume();
  if (diag) diag->removed_mean = mean;

  // b(v, p) = int (p - mean) div v
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n_vel()));
  std::vector<Vec3> grads(npc);
  for (std::size_t c = 0; c < s.num_cells(); ++c) {
    const auto nodes = s.cell_nodes(c);
    const double vol = s.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      s.grad_phi(c, q, grads);
      const double w = rule.weights[q] * vol * (p(s.quad_point(c, q)) - mean);
      for (int a = 0; a < npc; ++a)
        for (int j = 0; j < d; ++j) rhs[s.vel_dof(nodes[a], j)] += w * grads[a][j];
    }
  }
  auto sol = solver_.solve(rhs);
  FeFunction out{space_, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n_vel())), std::move(sol.pressure)};
  return out;
}

std::vector<FeFunction> ProjectionContext::project_time(const TimeVelocityField& y, const TimeGrid& grid,
                                                        TimeEndpoint endpoint) const {
  std::vector<FeFunction> out;
  const int n_steps = grid.steps();
  if (endpoint == TimeEndpoint::right) {
    for (int n = 0; n <= n_steps; ++n) out.push_back(project_ph(y.at(grid.node(n))));
  } else {
    for (int n = 1; n <= n_steps + 1; ++n) out.push_back(project_ph(y.at(grid.node(n - 1))));
  }
  return out;
}

}  // namespace nsv
