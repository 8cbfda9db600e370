#pragma once

#include <stdexcept>
#include <string>

namespace suris {

/// A requested evaluation lies outside the mathematical domain of the
/// operation (arccos overflow beyond the clamp, elliptic modulus >= 1,
/// eccentricity cap violation, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A rotation number (or level) was requested outside the attainable window
/// of the branch.
class NotAttainableError : public std::runtime_error {
 public:
  explicit NotAttainableError(const std::string& what) : std::runtime_error(what) {}
};

/// The bracketing scan for a root expected a monotone function and did not
/// find a sign change; usually a signal that the eccentricity is too large
/// for the graph/twist regime.
class NonMonotoneError : public std::runtime_error {
 public:
  explicit NonMonotoneError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solve (Newton + damped-gradient fallback) did not reach the
/// residual target.  Carries the best residual seen so callers can report it.
class NoConvergenceError : public std::runtime_error {
 public:
  NoConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_ = 0.0;
};

/// A potential handed to the periodic-rigidity driver failed its (r/k)
/// periodicity check.
class PeriodMismatchError : public std::runtime_error {
 public:
  explicit PeriodMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/// Two sampled functions that must share a quadrature grid do not.
class GridMismatchError : public std::runtime_error {
 public:
  explicit GridMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/// The low-mode Gram matrix is numerically singular; flags an eccentricity
/// outside the Riesz regime.
class SingularGramError : public std::runtime_error {
 public:
  explicit SingularGramError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace suris
