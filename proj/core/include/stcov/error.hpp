#pragma once

#include <stdexcept>
#include <string>

namespace stcov {

/// Raised when an integral cannot be brought under control: a divergent
/// tail, or an adaptive scheme that exhausts its panel budget far from
/// tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the iterative kriging solver when the residual target is not
/// met within the iteration cap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Malformed descriptor or data file. The message carries the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stcov
