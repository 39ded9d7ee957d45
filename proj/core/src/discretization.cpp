#include "nsv/discretization.hpp"

#include "nsv/error.hpp"
#include "nsv/quadrature.hpp"

namespace nsv {

void gauss_in_time(double a, double b, int points, std::vector<double>& t, std::vector<double>& w) {
  gauss_legendre(points, t, w);
  for (int i = 0; i < points; ++i) {
    t[i] = a + (b - a) * t[i];
    w[i] *= (b - a);
  }
}

Discretization::Discretization(const ProblemData& data, const MixedSpace& space, const TimeGrid& grid)
    : data_(data), space_(&space), grid_(grid) {
  data_.validate(space.dim());
  if (std::abs(grid.T() - data.T) > 1e-12 * data.T) throw ValidationError("time grid does not end at T");
  mass_ = assemble_mass(space);
  stiffness_ = assemble_stiffness(space);
  cell_load_ = assemble_cell_load(space);
  projections_ = std::make_unique<ProjectionContext>(space, data_.alpha);
  weights_ = nsv::control_weights(space.mesh(), grid_);

  const auto n_vel = static_cast<Eigen::Index>(space.n_vel());
  y0_h_ = data_.y0 ? projections_->project_ph(data_.y0).velocity : Eigen::VectorXd::Zero(n_vel);
  yT_h_ = data_.yT ? projections_->project_ph(data_.yT).velocity : Eigen::VectorXd::Zero(n_vel);

  const int steps = grid_.steps();
  target_load_.assign(steps + 1, Eigen::VectorXd::Zero(n_vel));
  target_norm2_.assign(steps + 1, 0.0);
  if (data_.alpha_Q > 0.0 && data_.yQ) {
    const auto& rule = space.rule();
    const int d = space.dim();
    std::vector<double> tg, wg;
    for (int n = 1; n <= steps; ++n) {
      gauss_in_time(grid_.node(n - 1), grid_.node(n), 2, tg, wg);
      const double tau = grid_.tau(n);
      auto& load = target_load_[n];
      double norm2 = 0.0;
      for (std::size_t c = 0; c < space.num_cells(); ++c) {
        const auto nodes = space.cell_nodes(c);
        const double vol = space.geometry(c).volume;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Point x = space.quad_point(c, q);
          for (std::size_t g = 0; g < tg.size(); ++g) {
            const Vec3 yq = data_.yQ.value(x, tg[g]);
            const double w = rule.weights[q] * vol * wg[g] / tau;
            for (int j = 0; j < d; ++j) {
              norm2 += w * yq[j] * yq[j];
              for (int a = 0; a < space.nodes_per_cell(); ++a)
                load[space.vel_dof(nodes[a], j)] += w * space.phi(q, a) * yq[j];
            }
          }
        }
      }
      target_norm2_[n] = norm2;
    }
  }
}

std::vector<Eigen::VectorXd> Discretization::control_loads(const Control& u) const {
  if (u.intervals() != grid_.steps() || u.cells() != space_->num_cells() || u.dim() != space_->dim())
    throw ValidationError("control shape does not match the discretization");
  std::vector<Eigen::VectorXd> loads(grid_.steps() + 1);
  for (int n = 1; n <= grid_.steps(); ++n) loads[n] = cell_load_ * u.interval(n);
  return loads;
}

std::vector<Eigen::VectorXd> Discretization::control_loads(const TimeVelocityField& u) const {
  const auto n_vel = static_cast<Eigen::Index>(space_->n_vel());
  std::vector<Eigen::VectorXd> loads(grid_.steps() + 1, Eigen::VectorXd::Zero(n_vel));
  if (!u) return loads;
  std::vector<double> tg, wg;
  for (int n = 1; n <= grid_.steps(); ++n) {
    gauss_in_time(grid_.node(n - 1), grid_.node(n), 2, tg, wg);
    for (std::size_t g = 0; g < tg.size(); ++g) {
      const double t = tg[g];
      loads[n] += (wg[g] / grid_.tau(n)) * assemble_load(*space_, [&](const Point& x) { return u.value(x, t); });
    }
  }
  return loads;
}

Eigen::VectorXd Discretization::cell_averages(const std::vector<const Eigen::VectorXd*>& per_interval) const {
  const int steps = grid_.steps();
  const int d = space_->dim();
  const auto block = static_cast<Eigen::Index>(space_->num_cells() * d);
  Eigen::VectorXd out(block * steps);
  for (int n = 1; n <= steps; ++n) {
    Eigen::VectorXd avg = cell_load_.transpose() * (*per_interval[n]);
    for (std::size_t c = 0; c < space_->num_cells(); ++c)
      for (int j = 0; j < d; ++j) avg[static_cast<Eigen::Index>(c) * d + j] /= space_->geometry(c).volume;
    out.segment((n - 1) * block, block) = avg;
  }
  return out;
}

}  // namespace nsv
