#include "nsv_cli/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>

#include "nsv/config.hpp"
#include "nsv/error.hpp"
#include "nsv/vtk.hpp"

namespace nsv::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  bool verbose = false;
};

struct Setup {
  RunConfig cfg;
  fs::path dir;
  std::shared_ptr<const Mesh> mesh;
  std::unique_ptr<MixedSpace> space;
  std::unique_ptr<Discretization> disc;
};

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (cfg.study) cfg.study->threads = o.threads;
  return cfg;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return dir;
}

Setup setup(const Options& o) {
  Setup s;
  s.cfg = load(o);
  s.dir = output_dir(s.cfg);
  s.mesh = std::make_shared<const Mesh>(s.cfg.build_mesh());
  s.space = std::make_unique<MixedSpace>(s.mesh);
  s.disc = std::make_unique<Discretization>(s.cfg.problem, *s.space, s.cfg.build_grid());
  return s;
}

std::string numbered(const fs::path& dir, const char* stem, int n) {
  return (dir / fmt::format("{}_{:04d}.vtk", stem, n)).string();
}

void write_state(const Setup& s, const StateTrajectory& y) {
  if (!s.cfg.write_vtk) return;
  for (int n = 0; n <= y.steps(); ++n) {
    const Eigen::VectorXd* p = n > 0 && y.pressure[n].size() ? &y.pressure[n] : nullptr;
    write_vtk(numbered(s.dir, "state", n), make_vtk(*s.space, fmt::format("state t={:.17g}", s.disc->grid().node(n)), &y.velocity[n], p));
  }
}

void write_diagnostics(const Setup& s, const StateTrajectory& y) {
  std::ofstream out(s.dir / "diagnostics.csv");
  out << "step,newton_iterations,picard_iterations,used_picard,final_residual,residuals\n";
  for (std::size_t n = 1; n < y.diagnostics.size(); ++n) {
    const auto& d = y.diagnostics[n];
    fmt::print(out, "{},{},{},{},{:.6e},", d.step, d.newton_iterations, d.picard_iterations, d.used_picard ? 1 : 0,
               d.residuals.empty() ? 0.0 : d.residuals.back());
    for (std::size_t i = 0; i < d.residuals.size(); ++i) fmt::print(out, "{}{:.6e}", i ? ";" : "", d.residuals[i]);
    out << '\n';
  }
}

void log_steps(const StateTrajectory& y, std::ostream& err) {
  for (std::size_t n = 1; n < y.diagnostics.size(); ++n) {
    const auto& d = y.diagnostics[n];
    fmt::print(err, "step={} newton={} picard={} residual={:.3e}\n", d.step, d.newton_iterations, d.picard_iterations,
               d.residuals.empty() ? 0.0 : d.residuals.back());
  }
}

std::vector<Eigen::VectorXd> loads(const Setup& s) {
  if (s.cfg.forcing) return s.disc->control_loads(s.cfg.forcing);
  std::vector<Eigen::VectorXd> f(s.disc->grid().steps() + 1, Eigen::VectorXd::Zero(s.space->n_vel()));
  return f;
}

NewtonOptions state_newton(const RunConfig& cfg) { return cfg.newton.value_or(NewtonOptions{}); }

int cmd_solve_state(const Options& o, std::ostream& out, std::ostream& err) {
  const Setup s = setup(o);
  const StateTrajectory y = solve_state(*s.disc, loads(s), state_newton(s.cfg));
  if (o.verbose) log_steps(y, err);
  write_state(s, y);
  write_diagnostics(s, y);
  int newton = 0;
  for (const auto& d : y.diagnostics) newton = std::max(newton, d.newton_iterations);
  fmt::print(out, "steps={} max_newton_iterations={} energy_final={:.17g}\n", y.steps(), newton,
             voigt_energy(*s.disc, y.velocity.back()));
  if (!s.cfg.case_name.empty()) {
    const ManufacturedCase c = build_case(s.cfg.case_name, s.cfg.problem.nu, s.cfg.problem.alpha);
    const double T = s.disc->grid().T();
    const double final_h1 = velocity_error(*s.space, y.velocity.back(), c.velocity.at(T)).h1();
    const TrajectoryErrors e = state_errors(*s.space, s.disc->grid(), y, c.velocity);
    fmt::print(out, "final_h1_error={:.17g}\n", final_h1);
    fmt::print(out, "nodal_max_h1={:.17g} l2_h1={:.17g} linf_h1={:.17g}\n", e.nodal_max_h1, e.l2_h1, e.linf_h1);
  }
  return ok;
}

void write_adjoint(const Setup& s, const AdjointTrajectory& adj, const Control* g) {
  if (!s.cfg.write_vtk) return;
  const int N = adj.steps();
  for (int n = 1; n <= N + 1; ++n) {
    VtkData d = make_vtk(*s.space, fmt::format("adjoint lambda_{}", n), &adj.lambda(n), &adj.pressure(n));
    if (g && n <= N) add_control(d, *g, n, "gradient");
    write_vtk(numbered(s.dir, "adjoint", n), d);
  }
}

int cmd_solve_adjoint(const Options& o, std::ostream& out, std::ostream& err) {
  const Setup s = setup(o);
  const StateTrajectory y = solve_state(*s.disc, loads(s), state_newton(s.cfg));
  if (o.verbose) log_steps(y, err);
  const AdjointTrajectory adj = solve_adjoint(*s.disc, y);
  // Derivative of the tracking terms with respect to an additive control at zero.
  const Control g = gradient(*s.disc, adj, s.disc->zero_control());
  write_state(s, y);
  write_diagnostics(s, y);
  write_adjoint(s, adj, &g);
  const ObjectiveParts parts = objective_parts(*s.disc, y, s.disc->zero_control());
  const auto& w = s.disc->control_weights();
  fmt::print(out, "terminal={:.17g} tracking={:.17g} gradient_norm={:.17g}\n", parts.terminal, parts.tracking,
             std::sqrt(control_inner(w, g.values(), g.values())));
  return ok;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  const Setup s = setup(o);
  const OptimizeOptions& opts = s.cfg.optimizer;
  const OptimizeReport r = optimize(*s.disc, s.disc->zero_control(s.cfg.initial_control), opts);
  {
    std::ofstream csv(s.dir / "optimize.csv");
    csv << "iteration,objective,stationarity,pointwise_stationarity,step,backtracks\n";
    for (std::size_t k = 0; k < r.objective.size(); ++k)
      fmt::print(csv, "{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", k, r.objective[k], r.stationarity[k],
                 k < r.pointwise_stationarity.size() ? r.pointwise_stationarity[k] : 0.0,
                 k < r.step.size() ? r.step[k] : 0.0, k < r.backtracks.size() ? r.backtracks[k] : 0);
  }
  if (o.verbose)
    for (std::size_t k = 0; k < r.objective.size(); ++k)
      fmt::print(err, "iter={} J={:.10e} stationarity={:.3e}\n", k, r.objective[k], r.stationarity[k]);
  write_state(s, r.state);
  write_adjoint(s, r.adjoint, nullptr);
  if (s.cfg.write_vtk)
    for (int n = 1; n <= r.control.intervals(); ++n) {
      VtkData d = make_vtk(*s.space, fmt::format("control interval {}", n), nullptr);
      add_control(d, r.control, n, "control");
      add_control(d, r.gradient, n, "gradient");
      write_vtk(numbered(s.dir, "control", n), d);
    }
  const double wmin = s.disc->control_weights().minCoeff();
  const double pointwise = opts.pointwise_tol > 0.0 ? opts.pointwise_tol : opts.tol / std::sqrt(wmin);
  const KktAudit a = kkt_audit(*s.disc, r.control, r.gradient, opts.tol, pointwise);
  {
    std::ofstream kkt(s.dir / "kkt.txt");
    fmt::print(kkt,
               "stationarity={:.6e}\nstationarity_tolerance={:.6e}\npointwise_tolerance={:.6e}\ninterior_gradient={:.6e}\n"
               "sign_violation={:.6e}\nactive_lower={}\nactive_upper={}\ninterior={}\nresult={}\n",
               a.stationarity, opts.tol, a.tolerance, a.interior_gradient, a.sign_violation, a.active_lower,
               a.active_upper, a.interior, a.passed ? "PASS" : "FAIL");
  }
  fmt::print(out, "converged={} iterations={} state_solves={} objective={:.17g} stationarity={:.6e} kkt={}\n",
             r.converged ? "yes" : "no", r.iterations, r.state_solves, r.objective.back(), r.stationarity.back(),
             a.passed ? "PASS" : "FAIL");
  return r.converged ? ok : optimizer_not_converged;
}

int cmd_convergence(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  if (!cfg.study) throw ValidationError("convergence needs a [study] section");
  const fs::path dir = output_dir(cfg);
  RateTable partial;
  try {
    const RateTable table = run_convergence(*cfg.study, &partial);
    std::ofstream csv(dir / "rates.csv");
    table.write_csv(csv);
    out << table.summary();
    return table.all_pass() ? ok : rate_failure;
  } catch (const SolverError&) {
    std::ofstream csv(dir / "rates_partial.csv");
    partial.write_csv(csv);
    if (o.verbose) fmt::print(err, "levels finished before the failure: {}\n", partial.rows.size());
    throw;
  }
}

int cmd_mesh_info(const Options& o, std::ostream& out) {
  const RunConfig cfg = load(o);
  const Mesh mesh = cfg.build_mesh();
  const MixedSpace space(std::make_shared<const Mesh>(mesh));
  fmt::print(out,
             "dim={}\nvertices={}\ncells={}\nboundary_facets={}\nh={:.17g}\nshape_regularity={:.17g}\n"
             "quasi_uniformity={:.17g}\nvolume={:.17g}\nvelocity_dofs={}\npressure_dofs={}\n",
             mesh.dim(), mesh.num_vertices(), mesh.num_cells(), mesh.boundary().size(), mesh.h(),
             mesh.shape_regularity(), mesh.quasi_uniformity(), mesh.total_volume(), space.n_vel(), space.n_pre());
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal control of the Navier-Stokes-Voigt equations"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory (overrides [output] dir)");
  app.add_option("--threads", o.threads, "worker threads for convergence levels")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", o.verbose, "per-step diagnostics on stderr");
  app.fallthrough();

  auto* state = app.add_subcommand("solve-state", "march the discrete state equation");
  auto* adjoint = app.add_subcommand("solve-adjoint", "solve state and adjoint, report the gradient");
  auto* opt = app.add_subcommand("optimize", "projected-gradient solve of the control problem");
  auto* conv = app.add_subcommand("convergence", "refinement study with slope fits");
  auto* info = app.add_subcommand("mesh-info", "mesh size and quality measures");
  for (auto* sub : {state, adjoint, opt, conv, info}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  if (o.config.empty()) {
    err << "error: --config is required\n";
    return config_error;
  }

  try {
    if (state->parsed()) return cmd_solve_state(o, out, err);
    if (adjoint->parsed()) return cmd_solve_adjoint(o, out, err);
    if (opt->parsed()) return cmd_optimize(o, out, err);
    if (conv->parsed()) return cmd_convergence(o, out, err);
    return cmd_mesh_info(o, out);
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const TopologyError& e) {
    err << "config error: mesh: " << e.what() << '\n';
    return config_error;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return solver_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return solver_error;
  }
}

}  // namespace nsv::cli
