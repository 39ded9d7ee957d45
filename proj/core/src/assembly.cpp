#include <cmath>

#include "nsv/error.hpp"
#include "nsv/fem.hpp"

namespace nsv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseOperator from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseOperator m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

/// Scalar P2 form integrated per cell and copied onto each velocity component.
template <class Kernel>
SparseOperator assemble_componentwise(const MixedSpace& space, Kernel&& kernel) {
  const int d = space.dim();
  const int npc = space.nodes_per_cell();
  const auto& rule = space.rule();
  Triplets t;
  t.reserve(space.num_cells() * npc * npc * d);
  std::vector<Vec3> grads(npc);
  Eigen::MatrixXd local(npc, npc);
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    local.setZero();
    const double vol = space.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.grad_phi(c, q, grads);
      const double w = rule.weights[q] * vol;
      for (int a = 0; a < npc; ++a)
        for (int b = 0; b < npc; ++b) local(a, b) += w * kernel(space, q, grads, a, b);
    }
    const auto nodes = space.cell_nodes(c);
    for (int a = 0; a < npc; ++a)
      for (int b = 0; b < npc; ++b)
        for (int comp = 0; comp < d; ++comp)
          t.emplace_back(space.vel_dof(nodes[a], comp), space.vel_dof(nodes[b], comp), local(a, b));
  }
  const auto n = static_cast<Eigen::Index>(space.n_vel());
  return from_triplets(n, n, t);
}

const MixedSpace& checked_space(const MixedSpace& space, const FeFunction& f) {
  if (f.space != &space) throw ValidationError("FeFunction belongs to a different space");
  if (static_cast<std::size_t>(f.velocity.size()) != space.n_vel())
    throw ValidationError("FeFunction velocity length does not match space");
  return space;
}

}  // namespace

FeFunction FeFunction::zero(const MixedSpace& space) {
  return {&space, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_vel())), std::nullopt};
}

double FieldError::h1() const { return std::sqrt(l2 * l2 + h1_semi * h1_semi); }

Eigen::VectorXd interpolate(const MixedSpace& space, const std::function<Vec3(const Point&)>& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(space.n_vel()));
  for (std::size_t i = 0; i < space.num_nodes(); ++i) {
    const Vec3 val = f(space.node(i));
    for (int comp = 0; comp < space.dim(); ++comp) v[space.vel_dof(static_cast<int>(i), comp)] = val[comp];
  }
  return v;
}

Eigen::VectorXd interpolate_pressure(const MixedSpace& space, const ScalarField& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(space.n_pre()));
  for (std::size_t i = 0; i < space.n_pre(); ++i) v[static_cast<Eigen::Index>(i)] = p(space.node(i));
  return v;
}

void zero_dirichlet(const MixedSpace& space, Eigen::VectorXd& v) {
  const auto& mask = space.dirichlet_mask();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) v[static_cast<Eigen::Index>(i)] = 0.0;
}

void evaluate_velocity(const MixedSpace& space, const Eigen::VectorXd& v, std::size_t c, std::size_t q,
                       std::span<const Vec3> grads, Vec3& value, Mat3& gradient) {
  const int d = space.dim();
  const auto nodes = space.cell_nodes(c);
  value = {0.0, 0.0, 0.0};
  gradient = {};
  for (int a = 0; a < space.nodes_per_cell(); ++a) {
    const double p = space.phi(q, a);
    for (int j = 0; j < d; ++j) {
      const double coef = v[space.vel_dof(nodes[a], j)];
      value[j] += p * coef;
      for (int k = 0; k < d; ++k) gradient[j][k] += grads[a][k] * coef;
    }
  }
}

double l2_norm(const MixedSpace& space, const Eigen::VectorXd& v) {
  return velocity_error(space, v, VelocityField{}).l2;
}

double h1_seminorm(const MixedSpace& space, const Eigen::VectorXd& v) {
  return velocity_error(space, v, VelocityField{}).h1_semi;
}

double h1_norm(const MixedSpace& space, const Eigen::VectorXd& v) { return velocity_error(space, v, VelocityField{}).h1(); }

FieldError velocity_error(const MixedSpace& space, const Eigen::VectorXd& v, const VelocityField& exact) {
  const int d = space.dim();
  const auto& rule = space.rule();
  std::vector<Vec3> grads(space.nodes_per_cell());
  double l2 = 0.0, semi = 0.0;
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const double vol = space.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.grad_phi(c, q, grads);
      Vec3 val;
      Mat3 grad;
      evaluate_velocity(space, v, c, q, grads, val, grad);
      if (exact.value || exact.gradient) {
        const Point x = space.quad_point(c, q);
        if (exact.value) val = val - exact.value(x);
        if (exact.gradient) {
          const Mat3 g = exact.gradient(x);
          for (int j = 0; j < d; ++j) grad[j] = grad[j] - g[j];
        }
      }
      const double w = rule.weights[q] * vol;
      for (int j = 0; j < d; ++j) {
        l2 += w * val[j] * val[j];
        for (int k = 0; k < d; ++k) semi += w * grad[j][k] * grad[j][k];
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(semi)};
}

double pressure_l2_error(const MixedSpace& space, const Eigen::VectorXd& p, const ScalarField& exact) {
  const int d = space.dim();
  const auto& rule = space.rule();
  double err = 0.0;
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const auto v = space.mesh().cell(c);
    const double vol = space.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double ph = 0.0;
      for (int i = 0; i <= d; ++i) ph += rule.points[q][i] * p[v[i]];
      const double e = ph - (exact ? exact(space.quad_point(c, q)) : 0.0);
      err += rule.weights[q] * vol * e * e;
    }
  }
  return std::sqrt(err);
}

SparseOperator assemble_mass(const MixedSpace& space) {
  return assemble_componentwise(space, [](const MixedSpace& s, std::size_t q, std::span<const Vec3>, int a, int b) {
    return s.phi(q, a) * s.phi(q, b);
  });
}

SparseOperator assemble_stiffness(const MixedSpace& space) {
  return assemble_componentwise(space, [](const MixedSpace&, std::size_t, std::span<const Vec3> g, int a, int b) {
    return dot(g[a], g[b]);
  });
}

SparseOperator assemble_a_alpha(const MixedSpace& space, double alpha) {
  if (alpha == 0.0) throw ValidationError("a_alpha requires alpha != 0");
  SparseOperator m = assemble_mass(space);
  m += (alpha * alpha) * assemble_stiffness(space);
  return m;
}

SparseOperator assemble_div(const MixedSpace& space) {
  const int d = space.dim();
  const int npc = space.nodes_per_cell();
  const auto& rule = space.rule();
  Triplets t;
  t.reserve(space.num_cells() * (d + 1) * npc * d);
  std::vector<Vec3> grads(npc);
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const auto v = space.mesh().cell(c);
    const auto nodes = space.cell_nodes(c);
    const double vol = space.geometry(c).volume;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(d + 1, npc * d);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.grad_phi(c, q, grads);
      const double w = rule.weights[q] * vol;
      for (int i = 0; i <= d; ++i) {
        const double psi = rule.points[q][i];
        for (int a = 0; a < npc; ++a)
          for (int comp = 0; comp < d; ++comp) local(i, a * d + comp) += w * psi * grads[a][comp];
      }
    }
    for (int i = 0; i <= d; ++i)
      for (int a = 0; a < npc; ++a)
        for (int comp = 0; comp < d; ++comp)
          t.emplace_back(v[i], space.vel_dof(nodes[a], comp), local(i, a * d + comp));
  }
  return from_triplets(static_cast<Eigen::Index>(space.n_pre()), static_cast<Eigen::Index>(space.n_vel()), t);
}

double apply_trilinear(const MixedSpace& space, const FeFunction& u, const FeFunction& v, const FeFunction& w) {
  checked_space(space, u);
  checked_space(space, v);
  checked_space(space, w);
  return apply_trilinear(space, u.velocity, v.velocity, w.velocity);
}

double apply_trilinear(const MixedSpace& space, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& w) {
  const int d = space.dim();
  const auto& rule = space.rule();
  std::vector<Vec3> grads(space.nodes_per_cell());
  double total = 0.0;
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const double vol = space.geometry(c).volume;
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.grad_phi(c, q, grads);
      Vec3 uu, vv, ww;
      Mat3 gu, gv, gw;
      evaluate_velocity(space, u, c, q, grads, uu, gu);
      evaluate_velocity(space, v, c, q, grads, vv, gv);
      evaluate_velocity(space, w, c, q, grads, ww, gw);
      // u_i d_i v_j w_j - u_i d_i w_j v_j
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += uu[i] * (gv[j][i] * ww[j] - gw[j][i] * vv[j]);
      cell_sum += rule.weights[q] * s;
    }
    total += 0.5 * vol * cell_sum;
  }
  return total;
}

SparseOperator assemble_convection(const MixedSpace& space, const FeFunction& y, ConvectionMode mode) {
  checked_space(space, y);
  return assemble_convection(space, y.velocity, mode);
}

SparseOperator assemble_convection(const MixedSpace& space, const Eigen::VectorXd& y, ConvectionMode mode) {
  if (static_cast<std::size_t>(y.size()) != space.n_vel()) throw ValidationError("convection field length mismatch");
  const int d = space.dim();
  const int npc = space.nodes_per_cell();
  const int nl = npc * d;
  const auto& rule = space.rule();
  const bool full = mode != ConvectionMode::state;
  Triplets t;
  t.reserve(space.num_cells() * nl * nl);
  std::vector<Vec3> grads(npc);
  Eigen::MatrixXd local(nl, nl);  // local(row = test (b, beta), col = trial (a, alpha))
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    local.setZero();
    const double vol = space.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.grad_phi(c, q, grads);
      Vec3 yv;
      Mat3 gy;
      evaluate_velocity(space, y, c, q, grads, yv, gy);
      const double w = 0.5 * rule.weights[q] * vol;
      std::array<double, 10> adv{};  // y . grad phi_a
      for (int a = 0; a < npc; ++a) adv[a] = dot(yv, grads[a]);
      for (int b = 0; b < npc; ++b) {
        const double pb = space.phi(q, b);
        for (int a = 0; a < npc; ++a) {
          const double pa = space.phi(q, a);
          const double frozen = w * (adv[a] * pb - adv[b] * pa);
          for (int comp = 0; comp < d; ++comp) local(b * d + comp, a * d + comp) += frozen;
          if (!full) continue;
          // c(z, y, w) with z = phi_a e_alpha, w = phi_b e_beta
          for (int beta = 0; beta < d; ++beta)
            for (int alpha = 0; alpha < d; ++alpha)
              local(b * d + beta, a * d + alpha) += w * pa * (pb * gy[beta][alpha] - grads[b][alpha] * yv[beta]);
        }
      }
    }
    const auto nodes = space.cell_nodes(c);
    for (int b = 0; b < npc; ++b)
      for (int beta = 0; beta < d; ++beta)
        for (int a = 0; a < npc; ++a)
          for (int alpha = 0; alpha < d; ++alpha) {
            const int row = space.vel_dof(nodes[b], beta);
            const int col = space.vel_dof(nodes[a], alpha);
            const double val = local(b * d + beta, a * d + alpha);
            if (mode == ConvectionMode::adjoint)
              t.emplace_back(col, row, val);
            else
              t.emplace_back(row, col, val);
          }
  }
  const auto n = static_cast<Eigen::Index>(space.n_vel());
  return from_triplets(n, n, t);
}

Eigen::VectorXd assemble_load(const MixedSpace& space, const std::function<Vec3(const Point&)>& f) {
  const int d = space.dim();
  const int npc = space.nodes_per_cell();
  const auto& rule = space.rule();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_vel()));
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const auto nodes = space.cell_nodes(c);
    const double vol = space.geometry(c).volume;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 val = f(space.quad_point(c, q));
      const double w = rule.weights[q] * vol;
      for (int a = 0; a < npc; ++a)
        for (int comp = 0; comp < d; ++comp) load[space.vel_dof(nodes[a], comp)] += w * space.phi(q, a) * val[comp];
    }
  }
  return load;
}

SparseOperator assemble_cell_load(const MixedSpace& space) {
  const int d = space.dim();
  const int npc = space.nodes_per_cell();
  const auto& rule = space.rule();
  Triplets t;
  t.reserve(space.num_cells() * npc * d);
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const auto nodes = space.cell_nodes(c);
    const double vol = space.geometry(c).volume;
    for (int a = 0; a < npc; ++a) {
      double integral = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) integral += rule.weights[q] * space.phi(q, a);
      for (int comp = 0; comp < d; ++comp)
        t.emplace_back(space.vel_dof(nodes[a], comp), static_cast<int>(c) * d + comp, integral * vol);
    }
  }
  return from_triplets(static_cast<Eigen::Index>(space.n_vel()), static_cast<Eigen::Index>(space.num_cells() * d), t);
}

}  // namespace nsv
