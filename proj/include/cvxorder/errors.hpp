#pragma once

#include <stdexcept>
#include <string>

namespace cvxorder {

/// Malformed arguments: empty inputs, out-of-range parameters, bad budgets.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Measures of incompatible dimension, or a 1D-only routine called with d != 1.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A solver failed to terminate or produced a result violating its own checks.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvxorder
