#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nsv {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (mesh files, configs, expressions).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Mesh topology or geometry violates an invariant.
class TopologyError : public Error {
 public:
  TopologyError(const std::string& what, long cell = -1)
      : Error(cell >= 0 ? "cell " + std::to_string(cell) + ": " + what : what), cell_(cell) {}
  long cell() const noexcept { return cell_; }

 private:
  long cell_;
};

/// Parameters outside their admissible range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Linear or nonlinear solver failure.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int step = -1, std::vector<double> residuals = {})
      : Error(step >= 0 ? "step " + std::to_string(step) + ": " + what : what),
        step_(step),
        residuals_(std::move(residuals)) {}
  int step() const noexcept { return step_; }
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  int step_;
  std::vector<double> residuals_;
};

}  // namespace nsv
