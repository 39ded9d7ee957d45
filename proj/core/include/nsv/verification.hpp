#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nsv/manufactured.hpp"
#include "nsv/optimize.hpp"

namespace nsv {

/// Space-time H1 errors of a piecewise-constant-in-time trajectory.
struct TrajectoryErrors {
  /// max over the time nodes of the H1 error.
  double nodal_max_h1 = 0.0;
  /// L2(0,T; H1), 3-point Gauss per interval.
  double l2_h1 = 0.0;
  /// L-infinity(0,T; H1) sampled at Gauss points, nodes and one-sided limits.
  double linf_h1 = 0.0;
};

/// Errors of y_sigma against an exact field; nodes t_1..t_N.
TrajectoryErrors state_errors(const MixedSpace& space, const TimeGrid& grid, const StateTrajectory& state,
                              const TimeVelocityField& exact);
/// Errors of lambda_sigma; nodal values lambda(t_n) compare to lambda_{n+1},
/// n = 0..N.
TrajectoryErrors adjoint_errors(const MixedSpace& space, const TimeGrid& grid, const AdjointTrajectory& adjoint,
                                const TimeVelocityField& exact);

/// Least-squares slope of log(y) against log(x).
double fit_slope(std::span<const double> x, std::span<const double> y);

struct RateRow {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  std::vector<double> errors;  // one per RateTable::norms entry
};

struct SlopeFit {
  std::string norm;
  std::string variable;  // "h" or "tau"
  double slope = 0.0;
  /// Slope with the coarsest level dropped.
  double slope_fine = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// |slope - slope_fine| < 0.15; otherwise the fit is inconclusive.
  bool stable = false;
};

struct RateTable {
  std::vector<std::string> norms;
  std::vector<RateRow> rows;
  std::vector<SlopeFit> fits;

  /// Fits every norm against h or tau and records pass/fail.
  void fit(const std::string& variable, double threshold);
  bool all_pass() const;
  const SlopeFit& slope(const std::string& norm) const;

  /// level,h,tau,<norm>... rows followed by slope rows.
  void write_csv(std::ostream& out) const;
  /// One line per fit: norm=<name> slope=<value> threshold=<value> PASS|FAIL
  std::string summary() const;
};

enum class Coupling {
  tau_h,     ///< steps double with each level
  tau_h2,    ///< steps quadruple with each level
  tau_only,  ///< mesh fixed, steps double
};

/// Parameters of a refinement study.
struct StudyConfig {
  std::string kind = "state";  // state | adjoint | control
  std::string case_name = "poly-sin";
  Coupling coupling = Coupling::tau_h2;
  int levels = 4;
  int base_n = 4;      // subdivisions per axis on level 0
  int base_steps = 4;  // time steps on level 0
  double T = 1.0;
  double nu = 1.0;
  double alpha = 0.5;
  double threshold = 0.9;
  int threads = 1;

  // adjoint and control studies
  double alpha_T = 1.0;
  double alpha_Q = 1.0;
  double gamma = 1e-2;
  double lower = -1.0;
  double upper = 1.0;
  /// Control studies solve one extra level this many refinements finer.
  int reference_offset = 1;

  NewtonOptions newton{};
  OptimizeOptions optimizer{};

  /// Throws ValidationError for fewer than 3 levels or bad parameters.
  void validate() const;
};

/// One discretization level: owns the mesh, space and operators.
struct Level {
  std::shared_ptr<const Mesh> mesh;
  std::unique_ptr<MixedSpace> space;
  std::unique_ptr<Discretization> disc;
  int n = 0;
  int steps = 0;
};

Level make_level(const ProblemData& data, std::shared_ptr<const Mesh> mesh, int n, int steps);

/// Tracking problem with partially active bounds used by control studies:
/// a vortex target y_Q, y_T = y_Q(T), zero initial state.
ProblemData control_problem(const StudyConfig& cfg);

/// ||u_coarse - u_fine||_{L2(Q)} for nested meshes and nested uniform time
/// grids. `ancestor` maps fine cells to coarse cells.
double control_difference(const Control& coarse, const Control& fine, const std::vector<int>& ancestor,
                          const Mesh& fine_mesh, const TimeGrid& fine_grid);

struct ControlStudyDetail {
  std::vector<OptimizeReport> reports;  // levels then reference
  std::vector<KktAudit> audits;
};

/// Runs the study and fits slopes: against tau for tau_only and control
/// studies, against h otherwise.
/// Solver failures propagate after the rows finished so far are stored in
/// `partial` when given.
RateTable run_convergence(const StudyConfig& cfg, RateTable* partial = nullptr, ControlStudyDetail* detail = nullptr);

}  // namespace nsv
