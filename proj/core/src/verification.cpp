#include "nsv/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "nsv/error.hpp"

namespace nsv {

namespace {

double h1_error(const MixedSpace& space, const Eigen::VectorXd& v, const TimeVelocityField& exact, double t) {
  return velocity_error(space, v, exact.at(t)).h1();
}

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
template <class Body>
void parallel_levels(int count, int threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, count); ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

int steps_for(const StudyConfig& cfg, int level) {
  switch (cfg.coupling) {
    case Coupling::tau_h2: return cfg.base_steps << (2 * level);
    default: return cfg.base_steps << level;
  }
}

int n_for(const StudyConfig& cfg, int level) { return cfg.coupling == Coupling::tau_only ? cfg.base_n : cfg.base_n << level; }

}  // namespace

TrajectoryErrors state_errors(const MixedSpace& space, const TimeGrid& grid, const StateTrajectory& state,
                              const TimeVelocityField& exact) {
  TrajectoryErrors e;
  std::vector<double> tg, wg;
  double l2 = 0.0;
  for (int n = 1; n <= grid.steps(); ++n) {
    const auto& y = state.velocity[n];
    const double node = h1_error(space, y, exact, grid.node(n));
    e.nodal_max_h1 = std::max(e.nodal_max_h1, node);
    e.linf_h1 = std::max({e.linf_h1, node, h1_error(space, y, exact, grid.node(n - 1))});
    gauss_in_time(grid.node(n - 1), grid.node(n), 3, tg, wg);
    for (std::size_t g = 0; g < tg.size(); ++g) {
      const double err = h1_error(space, y, exact, tg[g]);
      l2 += wg[g] * err * err;
      e.linf_h1 = std::max(e.linf_h1, err);
    }
  }
  e.l2_h1 = std::sqrt(l2);
  return e;
}

TrajectoryErrors adjoint_errors(const MixedSpace& space, const TimeGrid& grid, const AdjointTrajectory& adjoint,
                                const TimeVelocityField& exact) {
  TrajectoryErrors e;
  std::vector<double> tg, wg;
  double l2 = 0.0;
  const int steps = grid.steps();
  for (int n = 0; n <= steps; ++n) {
    const double node = h1_error(space, adjoint.lambda(n + 1), exact, grid.node(n));
    e.nodal_max_h1 = std::max(e.nodal_max_h1, node);
    e.linf_h1 = std::max(e.linf_h1, node);
  }
  for (int n = 1; n <= steps; ++n) {
    const auto& lam = adjoint.lambda(n);
    e.linf_h1 = std::max({e.linf_h1, h1_error(space, lam, exact, grid.node(n - 1)),
                          h1_error(space, lam, exact, grid.node(n))});
    gauss_in_time(grid.node(n - 1), grid.node(n), 3, tg, wg);
    for (std::size_t g = 0; g < tg.size(); ++g) {
      const double err = h1_error(space, lam, exact, tg[g]);
      l2 += wg[g] * err * err;
      e.linf_h1 = std::max(e.linf_h1, err);
    }
  }
  e.l2_h1 = std::sqrt(l2);
  return e;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

void RateTable::fit(const std::string& variable, double threshold) {
  if (rows.size() < 3) throw ValidationError("rate fits need at least 3 levels");
  fits.clear();
  std::vector<double> x;
  for (const auto& r : rows) x.push_back(variable == "tau" ? r.tau : r.h);
  for (std::size_t k = 0; k < norms.size(); ++k) {
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(r.errors[k]);
    SlopeFit f;
    f.norm = norms[k];
    f.variable = variable;
    f.threshold = threshold;
    f.slope = fit_slope(x, y);
    f.slope_fine = fit_slope(std::span(x).subspan(1), std::span(y).subspan(1));
    f.pass = f.slope >= threshold;
    f.stable = std::abs(f.slope - f.slope_fine) < 0.15;
    fits.push_back(f);
  }
}

bool RateTable::all_pass() const {
  for (const auto& f : fits)
    if (!f.pass) return false;
  return !fits.empty();
}

const SlopeFit& RateTable::slope(const std::string& norm) const {
  for (const auto& f : fits)
    if (f.norm == norm) return f;
  throw ValidationError("no slope fitted for norm '" + norm + "'");
}

void RateTable::write_csv(std::ostream& out) const {
  out << "level,h,tau";
  for (const auto& n : norms) out << ',' << n;
  out << '\n' << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.level << ',' << r.h << ',' << r.tau;
    for (double e : r.errors) out << ',' << e;
    out << '\n';
  }
  for (const auto& f : fits)
    out << "slope," << f.norm << ',' << f.variable << ',' << f.slope << ',' << f.threshold << ','
        << (f.pass ? "PASS" : "FAIL") << ',' << (f.stable ? "stable" : "inconclusive") << '\n';
}

std::string RateTable::summary() const {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3);
  for (const auto& f : fits)
    s << "norm=" << f.norm << " slope=" << f.slope << " threshold=" << f.threshold << ' '
      << (f.pass ? "PASS" : "FAIL") << '\n';
  return s.str();
}

void StudyConfig::validate() const {
  if (kind != "state" && kind != "adjoint" && kind != "control")
    throw ValidationError("study kind must be state, adjoint or control");
  if (levels < 3) throw ValidationError("a convergence study needs at least 3 levels");
  if (kind != "control") {
    const auto names = case_catalogue();
    if (std::find(names.begin(), names.end(), case_name) == names.end())
      throw ValidationError("unknown manufactured case '" + case_name + "'");
  }
  if (base_n < 1 || base_steps < 1) throw ValidationError("base_n and base_steps must be positive");
  if (T <= 0.0 || nu <= 0.0 || alpha == 0.0) throw ValidationError("invalid physical parameters");
  if (kind == "control" && reference_offset < 1) throw ValidationError("reference_offset must be at least 1");
  if (kind == "control" && coupling == Coupling::tau_only)
    throw ValidationError("control studies refine space and time together");
  if (lower > upper) throw ValidationError("control bounds: lower > upper");
  if (threads < 1) throw ValidationError("threads must be positive");
}

Level make_level(const ProblemData& data, std::shared_ptr<const Mesh> mesh, int n, int steps) {
  Level l;
  l.mesh = std::move(mesh);
  l.space = std::make_unique<MixedSpace>(l.mesh);
  l.disc = std::make_unique<Discretization>(data, *l.space, TimeGrid::uniform(data.T, steps));
  l.n = n;
  l.steps = steps;
  return l;
}

ProblemData control_problem(const StudyConfig& cfg) {
  const auto tg = build_case("taylor-green", cfg.nu, cfg.alpha);
  ProblemData d;
  d.nu = cfg.nu;
  d.alpha = cfg.alpha;
  d.gamma = cfg.gamma;
  d.alpha_T = cfg.alpha_T;
  d.alpha_Q = cfg.alpha_Q;
  d.T = cfg.T;
  d.box = ControlBounds::uniform(2, cfg.lower, cfg.upper);
  // Steady vortex target; with alpha_T = 0 the terminal target is unused.
  const double scale = 2.0;
  auto vortex = tg.velocity.at(0.0);
  d.yQ.value = [vortex, scale](const Point& x, double) { return scale * vortex.value(x); };
  d.yT.value = [vortex, scale](const Point& x) { return scale * vortex.value(x); };
  d.yT.gradient = [vortex, scale](const Point& x) {
    Mat3 g = vortex.gradient(x);
    for (auto& row : g) row = scale * row;
    return g;
  };
  return d;
}

double control_difference(const Control& coarse, const Control& fine, const std::vector<int>& ancestor,
                          const Mesh& fine_mesh, const TimeGrid& fine_grid) {
  if (fine.intervals() % coarse.intervals() != 0) throw ValidationError("time grids are not nested");
  const int ratio = fine.intervals() / coarse.intervals();
  double s = 0.0;
  for (int n = 1; n <= fine.intervals(); ++n) {
    const int nc = (n - 1) / ratio + 1;
    for (std::size_t c = 0; c < fine.cells(); ++c) {
      const double w = fine_grid.tau(n) * fine_mesh.volume(c);
      for (int j = 0; j < fine.dim(); ++j) {
        const double d = fine(n, c, j) - coarse(nc, static_cast<std::size_t>(ancestor[c]), j);
        s += w * d * d;
      }
    }
  }
  return std::sqrt(s);
}

RateTable run_convergence(const StudyConfig& cfg, RateTable* partial, ControlStudyDetail* detail) {
  cfg.validate();
  RateTable table;
  const std::string variable = cfg.coupling == Coupling::tau_only || cfg.kind == "control" ? "tau" : "h";
  std::mutex mutex;
  std::vector<char> done(cfg.levels, 0);
  table.rows.resize(cfg.levels);
  auto finish = [&] {
    std::vector<RateRow> rows;
    for (int i = 0; i < cfg.levels; ++i)
      if (done[i]) rows.push_back(table.rows[i]);
    table.rows = std::move(rows);
  };

  try {
    if (cfg.kind == "state" || cfg.kind == "adjoint") {
      table.norms = {"nodal_max_h1", "l2_h1", "linf_h1"};
      const ManufacturedCase mc = build_case(cfg.case_name, cfg.nu, cfg.alpha);
      std::optional<AdjointCase> ac;
      if (cfg.kind == "adjoint") ac = build_adjoint_case(cfg.case_name, cfg.nu, cfg.alpha, cfg.T, cfg.alpha_T, cfg.alpha_Q);
      const ProblemData data = ac ? ac->data : state_problem(mc, cfg.T);
      if (mc.dim != 2 && mc.dim != 3) throw ValidationError("bad case dimension");
      parallel_levels(cfg.levels, cfg.threads, [&](int i) {
        const int n = n_for(cfg, i);
        const int steps = steps_for(cfg, i);
        Level lv = make_level(data, std::make_shared<Mesh>(build_structured(Box::unit(mc.dim), n)), n, steps);
        const auto& disc = *lv.disc;
        const auto state = solve_state(disc, mc.forcing, cfg.newton);
        TrajectoryErrors e;
        if (ac) {
          e = adjoint_errors(*lv.space, disc.grid(), solve_adjoint(disc, state), ac->adjoint);
        } else {
          e = state_errors(*lv.space, disc.grid(), state, mc.velocity);
        }
        std::lock_guard lock(mutex);
        table.rows[i] = {i, lv.mesh->h(), disc.grid().max_tau(), {e.nodal_max_h1, e.l2_h1, e.linf_h1}};
        done[i] = 1;
      });
    } else {
      table.norms = {"control_l2"};
      const ProblemData data = control_problem(cfg);
      const int total = cfg.levels + cfg.reference_offset;
      std::vector<std::shared_ptr<const Mesh>> chain{std::make_shared<Mesh>(build_structured(Box::unit(2), cfg.base_n))};
      for (int i = 1; i < total; ++i) chain.push_back(std::make_shared<Mesh>(refine_uniform(*chain.back())));

      std::vector<Level> levels(cfg.levels + 1);
      std::vector<OptimizeReport> reports(cfg.levels + 1);
      auto solve = [&](int slot, int mesh_level) {
        const int steps = steps_for(cfg, mesh_level);
        levels[slot] = make_level(data, chain[mesh_level], cfg.base_n << mesh_level, steps);
        const auto& disc = *levels[slot].disc;
        reports[slot] = optimize(disc, disc.zero_control(), cfg.optimizer);
      };
      parallel_levels(cfg.levels + 1, cfg.threads, [&](int i) {
        // Reference first so that it overlaps with the cheap levels.
        const int slot = i == 0 ? cfg.levels : i - 1;
        solve(slot, slot == cfg.levels ? total - 1 : slot);
      });
      const Level& ref = levels[cfg.levels];
      for (int i = 0; i < cfg.levels; ++i) {
        std::vector<const Mesh*> sub;
        for (int k = i; k < total; ++k) sub.push_back(chain[k].get());
        const auto anc = ancestor_map(sub);
        const double err =
            control_difference(reports[i].control, reports[cfg.levels].control, anc, *ref.mesh, ref.disc->grid());
        table.rows[i] = {i, levels[i].mesh->h(), levels[i].disc->grid().max_tau(), {err}};
        done[i] = 1;
      }
      if (detail) {
        detail->reports = reports;
        detail->audits.clear();
        for (int i = 0; i <= cfg.levels; ++i) {
          const auto& disc = *levels[i].disc;
          const double wmin = disc.control_weights().minCoeff();
          const double pointwise =
              cfg.optimizer.pointwise_tol > 0.0 ? cfg.optimizer.pointwise_tol : cfg.optimizer.tol / std::sqrt(wmin);
          detail->audits.push_back(
              kkt_audit(disc, reports[i].control, reports[i].gradient, cfg.optimizer.tol, pointwise));
        }
      }
    }
  } catch (...) {
    finish();
    if (partial) *partial = table;
    throw;
  }
  finish();
  table.fit(variable, cfg.threshold);
  if (partial) *partial = table;
  return table;
}

}  // namespace nsv
