#include "nsv/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "nsv/error.hpp"

namespace nsv {

namespace {

constexpr double kPi = std::numbers::pi;

using Factor = double (*)(double, int);

// s^2 (1 - s)^2 and its derivatives.
double poly_factor(double s, int k) {
  switch (k) {
    case 0: return s * s * (1.0 - s) * (1.0 - s);
    case 1: return 2.0 * s - 6.0 * s * s + 4.0 * s * s * s;
    case 2: return 2.0 - 12.0 * s + 12.0 * s * s;
    case 3: return -12.0 + 24.0 * s;
    case 4: return 24.0;
    default: return 0.0;
  }
}

// sin^2(pi s) = (1 - cos(2 pi s)) / 2 and its derivatives.
double sin2_factor(double s, int k) {
  const double a = 2.0 * kPi * s;
  if (k == 0) return 0.5 * (1.0 - std::cos(a));
  const double scale = -0.5 * std::pow(2.0 * kPi, k);
  switch (k % 4) {
    case 0: return scale * std::cos(a);
    case 1: return -scale * std::sin(a);
    case 2: return -scale * std::cos(a);
    default: return scale * std::sin(a);
  }
}

struct TimeFactor {
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

using Multi = std::array<int, 3>;

/// Velocity y_j = g(t) sum_k C_jk d_k psi with psi = prod phi_k(x_k).
struct SkewPotential {
  int dim = 2;
  std::array<Factor, 3> phi{};
  TimeFactor time;

  double C(int j, int k) const {
    if (dim == 2) {
      static constexpr double c2[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};
      return c2[j][k];
    }
    static constexpr double c3[3][3] = {{0.0, 1.0, -1.0}, {-1.0, 0.0, 1.0}, {1.0, -1.0, 0.0}};
    return c3[j][k];
  }

  double D(const Point& x, const Multi& beta) const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= phi[k](x[k], beta[k]);
    return v;
  }

  /// sum_k C_jk D^{e_k + beta} psi (spatial part only).
  Vec3 V(const Point& x, Multi beta) const {
    Vec3 out{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) {
      Multi b = beta;
      ++b[k];
      const double d = D(x, b);
      for (int j = 0; j < dim; ++j) out[j] += C(j, k) * d;
    }
    return out;
  }

  Vec3 value_s(const Point& x) const { return V(x, {0, 0, 0}); }
  Mat3 grad_s(const Point& x) const {
    Mat3 g{};
    for (int m = 0; m < dim; ++m) {
      Multi b{0, 0, 0};
      b[m] = 1;
      const Vec3 col = V(x, b);
      for (int j = 0; j < dim; ++j) g[j][m] = col[j];
    }
    return g;
  }
  Vec3 lap_s(const Point& x) const {
    Vec3 out{0.0, 0.0, 0.0};
    for (int m = 0; m < dim; ++m) {
      Multi b{0, 0, 0};
      b[m] = 2;
      out = out + V(x, b);
    }
    return out;
  }
  /// grad of Lap, [j][l] = d_l Lap y_j
  Mat3 grad_lap_s(const Point& x) const {
    Mat3 g{};
    for (int l = 0; l < dim; ++l)
      for (int m = 0; m < dim; ++m) {
        Multi b{0, 0, 0};
        b[m] += 2;
        b[l] += 1;
        const Vec3 col = V(x, b);
        for (int j = 0; j < dim; ++j) g[j][l] += col[j];
      }
    return g;
  }

  TimeVelocityField field() const {
    TimeVelocityField f;
    auto self = *this;
    f.value = [self](const Point& x, double t) { return self.time.g(t) * self.value_s(x); };
    f.gradient = [self](const Point& x, double t) {
      Mat3 g = self.grad_s(x);
      const double s = self.time.g(t);
      for (auto& row : g) row = s * row;
      return g;
    };
    return f;
  }
};

/// p = h(t) prod cos(pi x_k), zero mean on the unit box.
struct CosPressure {
  int dim = 2;
  TimeFactor time;

  double value(const Point& x, double t) const {
    double v = time.g(t);
    for (int k = 0; k < dim; ++k) v *= std::cos(kPi * x[k]);
    return v;
  }
  Vec3 grad(const Point& x, double t) const {
    Vec3 out{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) {
      double v = -kPi * std::sin(kPi * x[k]) * time.g(t);
      for (int m = 0; m < dim; ++m)
        if (m != k) v *= std::cos(kPi * x[m]);
      out[k] = v;
    }
    return out;
  }
};

Vec3 mat_vec(const Mat3& a, const Vec3& v) {
  return {dot(a[0], v), dot(a[1], v), dot(a[2], v)};
}
Vec3 mat_t_vec(const Mat3& a, const Vec3& v) {
  Vec3 out{0.0, 0.0, 0.0};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) out[k] += a[j][k] * v[j];
  return out;
}

struct CaseParts {
  SkewPotential potential;
  CosPressure pressure;
};

CaseParts case_parts(const std::string& name) {
  CaseParts c;
  if (name == "poly-sin") {
    c.potential.dim = 2;
    c.potential.phi = {poly_factor, sin2_factor, nullptr};
    c.potential.time = {[](double t) { return 5.0 * (1.0 + std::sin(kPi * t)); },
                        [](double t) { return 5.0 * kPi * std::cos(kPi * t); }};
    c.pressure = {2, {[](double t) { return 1.0 + t; }, [](double) { return 1.0; }}};
  } else if (name == "taylor-green") {
    c.potential.dim = 2;
    c.potential.phi = {sin2_factor, sin2_factor, nullptr};
    c.potential.time = {[](double t) { return 0.5 * std::exp(-t); }, [](double t) { return -0.5 * std::exp(-t); }};
    c.pressure = {2, {[](double t) { return 0.25 * std::exp(-2.0 * t); }, [](double t) { return -0.5 * std::exp(-2.0 * t); }}};
  } else if (name == "vector-potential-3d") {
    c.potential.dim = 3;
    c.potential.phi = {poly_factor, poly_factor, poly_factor};
    c.potential.time = {[](double t) { return 300.0 * (1.0 + 0.5 * t); }, [](double) { return 150.0; }};
    c.pressure = {3, {[](double t) { return 0.5 * std::cos(t); }, [](double t) { return -0.5 * std::sin(t); }}};
  } else {
    throw ValidationError("unknown manufactured case '" + name + "'");
  }
  return c;
}

}  // namespace

std::vector<std::string> case_catalogue() { return {"poly-sin", "taylor-green", "vector-potential-3d"}; }

ManufacturedCase build_case(const std::string& name, double nu, double alpha) {
  const CaseParts parts = case_parts(name);
  const SkewPotential psi = parts.potential;
  const CosPressure pr = parts.pressure;
  ManufacturedCase c;
  c.name = name;
  c.dim = psi.dim;
  c.nu = nu;
  c.alpha = alpha;
  c.velocity = psi.field();
  c.pressure = [pr](const Point& x, double t) { return pr.value(x, t); };
  c.velocity_dt = [psi](const Point& x, double t) { return psi.time.dg(t) * psi.value_s(x); };
  c.laplacian = [psi](const Point& x, double t) { return psi.time.g(t) * psi.lap_s(x); };
  c.laplacian_dt = [psi](const Point& x, double t) { return psi.time.dg(t) * psi.lap_s(x); };
  c.pressure_gradient = [pr](const Point& x, double t) { return pr.grad(x, t); };
  const double a2 = alpha * alpha;
  c.forcing.value = [psi, pr, nu, a2](const Point& x, double t) {
    const double g = psi.time.g(t), dg = psi.time.dg(t);
    const Vec3 y = g * psi.value_s(x);
    Mat3 gy = psi.grad_s(x);
    for (auto& row : gy) row = g * row;
    const Vec3 lap = psi.lap_s(x);
    return dg * psi.value_s(x) - (nu * g + a2 * dg) * lap + mat_vec(gy, y) + pr.grad(x, t);
  };
  return c;
}

ProblemData state_problem(const ManufacturedCase& c, double T) {
  ProblemData d;
  d.nu = c.nu;
  d.alpha = c.alpha;
  d.gamma = 1.0;
  d.alpha_T = 1.0;
  d.alpha_Q = 0.0;
  d.T = T;
  d.box = ControlBounds::unbounded(c.dim);
  d.y0 = c.velocity.at(0.0);
  return d;
}

AdjointCase build_adjoint_case(const std::string& name, double nu, double alpha, double T, double alpha_T,
                               double alpha_Q) {
  if (alpha_T <= 0.0 || alpha_Q <= 0.0) throw ValidationError("adjoint case needs positive tracking weights");
  AdjointCase ac;
  ac.state = build_case(name, nu, alpha);
  const CaseParts parts = case_parts(name);
  const SkewPotential ypot = parts.potential;

  SkewPotential lpot;
  lpot.dim = ypot.dim;
  lpot.phi = {poly_factor, poly_factor, ypot.dim == 3 ? poly_factor : nullptr};
  const double amp = ypot.dim == 3 ? 100.0 : 20.0;
  // lambda(T) = 0 keeps y_T = y(T) inside V; a nonzero terminal value would
  // need Lap lambda(T) = 0 on the boundary.
  lpot.time = {[amp, T](double t) { return amp * (T - t) * (1.0 + t); },
               [amp, T](double t) { return amp * (T - 1.0 - 2.0 * t); }};
  const CosPressure q{ypot.dim, {[](double t) { return 0.5 + t; }, [](double) { return 1.0; }}};

  ac.adjoint = lpot.field();
  ac.adjoint_pressure = [q](const Point& x, double t) { return q.value(x, t); };

  const double a2 = alpha * alpha;
  // R = -l_t - nu Lap l + a^2 Lap l_t - (y . grad) l + (grad y)^T l + grad q
  auto residual = [ypot, lpot, q, nu, a2](const Point& x, double t) {
    const double gl = lpot.time.g(t), dgl = lpot.time.dg(t), gy = ypot.time.g(t);
    const Vec3 lam = gl * lpot.value_s(x);
    Mat3 glam = lpot.grad_s(x);
    for (auto& row : glam) row = gl * row;
    Mat3 gyv = ypot.grad_s(x);
    for (auto& row : gyv) row = gy * row;
    const Vec3 y = gy * ypot.value_s(x);
    const Vec3 lap = lpot.lap_s(x);
    return -dgl * lpot.value_s(x) - (nu * gl - a2 * dgl) * lap - mat_vec(glam, y) + mat_t_vec(gyv, lam) +
           q.grad(x, t);
  };

  ProblemData d = state_problem(ac.state, T);
  d.alpha_T = alpha_T;
  d.alpha_Q = alpha_Q;
  const TimeVelocityField yfield = ac.state.velocity;
  d.yQ.value = [yfield, residual, alpha_Q](const Point& x, double t) {
    return yfield.value(x, t) - (1.0 / alpha_Q) * residual(x, t);
  };
  // y_T = y(T) - (lambda(T) - a^2 Lap lambda(T)) / alpha_T
  d.yT.value = [ypot, lpot, T, a2, alpha_T](const Point& x) {
    const double gl = lpot.time.g(T);
    const Vec3 l = lpot.value_s(x) - a2 * lpot.lap_s(x);
    return ypot.time.g(T) * ypot.value_s(x) - (gl / alpha_T) * l;
  };
  d.yT.gradient = [ypot, lpot, T, a2, alpha_T](const Point& x) {
    const double gl = lpot.time.g(T), gy = ypot.time.g(T);
    const Mat3 gv = ypot.grad_s(x), lv = lpot.grad_s(x), llap = lpot.grad_lap_s(x);
    Mat3 out{};
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[j][k] = gy * gv[j][k] - (gl / alpha_T) * (lv[j][k] - a2 * llap[j][k]);
    return out;
  };
  ac.data = d;
  return ac;
}

}  // namespace nsv
