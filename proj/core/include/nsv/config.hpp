#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "nsv/mesh.hpp"
#include "nsv/optimize.hpp"
#include "nsv/time_grid.hpp"
#include "nsv/verification.hpp"

namespace nsv {

/// Raw `[section]` / `key = value` text. Comments start with '#' or ';'.
/// Duplicate sections merge; duplicate keys are rejected.
struct IniDocument {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;

  static IniDocument parse(std::istream& in);
};

/// Everything a CLI command needs, validated at load time.
struct RunConfig {
  ProblemData problem;
  /// Manufactured case supplying y0 and the forcing; empty when unused.
  std::string case_name;
  /// Forcing for solve-state (empty means zero).
  TimeVelocityField forcing;
  /// Constant initial control for optimize.
  double initial_control = 0.0;

  std::string mesh_file;
  int dim = 2;
  int n = 8;
  int refine = 0;
  int steps = 16;
  double rho0 = 2.0;

  /// Set only when the config overrides a Newton key.
  std::optional<NewtonOptions> newton;
  OptimizeOptions optimizer;
  std::optional<StudyConfig> study;

  std::string out_dir = "out";
  bool write_vtk = true;

  Mesh build_mesh() const;
  TimeGrid build_grid() const;
};

/// Throws ParseError for syntax errors and unknown sections or keys (the
/// message names the key) and ValidationError for inadmissible values.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace nsv
