#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "jain/errors.hpp"

namespace jain {

/// Natural base, used as the upper limit for the exponential base a.
inline constexpr double kEulerE = 2.718281828459045235360287471352662498;

/// The (beta, a) pair identifying one member of the operator family.
///
/// Valid window: 0 <= beta < 1 and 1 < a <= e, which together force
/// beta * log(a) < 1 (asserted explicitly anyway). log(a) is always the
/// natural logarithm.
class JainParams {
 public:
  JainParams(double beta, double a) : beta_(beta), a_(a), log_a_(std::log(a)) {
    if (auto reason = validate(beta, a)) throw DomainError(*reason);
  }

  /// Returns a human-readable reason when (beta, a) is invalid.
  static std::optional<std::string> validate(double beta, double a) {
    if (!(beta >= 0.0) || !(beta < 1.0))
      return "beta = " + std::to_string(beta) + " outside [0, 1)";
    if (!(a > 1.0) || !(a <= kEulerE))
      return "a = " + std::to_string(a) + " outside (1, e]";
    if (!(beta * std::log(a) < 1.0))
      return "beta * log(a) = " + std::to_string(beta * std::log(a)) +
             " not below 1";
    return std::nullopt;
  }

  double beta() const { return beta_; }
  double a() const { return a_; }
  double log_a() const { return log_a_; }
  /// beta * log(a), the geometric ratio governing the auxiliary series.
  double q() const { return beta_ * log_a_; }

  friend bool operator==(const JainParams& l, const JainParams& r) {
    return l.beta_ == r.beta_ && l.a_ == r.a_;
  }

 private:
  double beta_;
  double a_;
  double log_a_;
};

/// Stopping rule for the infinite sums over k. A sum stops once
/// `consecutive_small` successive terms fall below
/// max(abs_tol, rel_tol * |partial sum|) and the index has passed the
/// series-specific mode estimate; reaching `k_max` first raises
/// TruncationError.
struct TruncationPolicy {
  double abs_tol = 1e-16;
  double rel_tol = 1e-14;
  int consecutive_small = 5;
  long k_max = 1000000;

  void check() const {
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
    if (consecutive_small < 1)
      throw DomainError("consecutive_small must be >= 1");
    if (k_max < 1) throw DomainError("k_max must be >= 1");
  }
};

/// Result of summing the basis weights: partial sum, last index used and a
/// conservative estimate of the neglected tail. The partial sum stays below
/// 1 + tail_estimate up to double-precision accumulation slack (~1e-12 for
/// the longest sums in scope).
struct WeightTail {
  double partial_sum = 0.0;
  long k_used = 0;
  double tail_estimate = 0.0;
};

}  // namespace jain
