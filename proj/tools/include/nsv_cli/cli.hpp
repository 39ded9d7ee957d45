#pragma once

#include <iosfwd>

namespace nsv::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  ok = 0,
  /// A convergence study finished but some slope missed its threshold.
  rate_failure = 1,
  config_error = 2,
  solver_error = 3,
  optimizer_not_converged = 4,
};

/// Parses argv and runs one subcommand; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsv::cli
