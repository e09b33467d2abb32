#pragma once

#include <stdexcept>
#include <string>

namespace twovis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix shapes or distribution sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a precondition (not Hermitian, not unitary, not a state...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Two algebraically equivalent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// No optimizer restart converged; carries the best value seen anyway.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace twovis
