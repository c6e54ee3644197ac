#pragma once

#include <stdexcept>
#include <string>

namespace jain {

/// Invalid parameter or argument outside the mathematical domain of an
/// operation (bad (beta, a) pair, nonpositive alpha, identity evaluated
/// outside its validity window, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series did not satisfy its stopping rule before the hard term cap.
/// Carries the partial sum and the last index so callers can report
/// how far the summation got.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double partial_sum, long k_used)
      : std::runtime_error(what), partial_sum(partial_sum), k_used(k_used) {}

  double partial_sum;
  long k_used;
};

/// Derivative requested at a point where the function is not differentiable.
class NondifferentiableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Moment or series order outside the supported range.
class UnsupportedOrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A hypothesis of a quantitative bound is violated; the message names the
/// failed inequality.
class ConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace jain
