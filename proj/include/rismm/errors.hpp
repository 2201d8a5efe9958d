#pragma once

#include <stdexcept>
#include <string>

namespace rismm {

// Invalid model or run parameter (negative density, l_min > l_max, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (d <= 0, xi > R).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature or sampling budget ran out before the requested accuracy.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo estimator saw no samples (e.g. no users in any scene).
class EmptyEstimateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace rismm
