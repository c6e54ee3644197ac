#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "jain/errors.hpp"
#include "jain/params.hpp"

namespace jain {

/// Compensated (Kahan) accumulator. Tracks the rounding error of each
/// addition and feeds it back into the next one.
struct KahanAccumulator {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

struct SeriesResult {
  double sum = 0.0;
  long k_used = 0;        // last index included
  double tail_estimate = 0.0;
};

/// Sums term(k) for k = k_start, k_start+1, ... under the adaptive stopping
/// rule of TruncationPolicy. The terms of every series in this library first
/// grow towards a mode and then decay, so the small-term test is suppressed
/// until k passes `min_k` (the caller's mode estimate); stopping in the
/// growth phase would silently undersum.
///
/// The tail estimate extrapolates the last term geometrically using the
/// worst decay ratio observed over the final run of small terms.
template <class TermFn>
SeriesResult sum_adaptive(TermFn&& term, long k_start, long min_k,
                          const TruncationPolicy& policy,
                          const char* series_name) {
  policy.check();
  KahanAccumulator acc;
  int small_run = 0;
  double prev_abs = 0.0;
  double ratio_max = 0.0;
  double last_abs = 0.0;
  for (long k = k_start; k <= policy.k_max; ++k) {
    const double t = term(k);
    acc.add(t);
    const double abs_t = std::fabs(t);
    const double threshold =
        std::max(policy.abs_tol, policy.rel_tol * std::fabs(acc.value()));
    if (abs_t <= threshold && k >= min_k) {
      if (small_run == 0) ratio_max = 0.0;
      if (prev_abs > 0.0) ratio_max = std::max(ratio_max, abs_t / prev_abs);
      ++small_run;
      if (small_run >= policy.consecutive_small) {
        const double r = std::min(ratio_max, 0.999);
        SeriesResult out;
        out.sum = acc.value();
        out.k_used = k;
        out.tail_estimate = abs_t * r / (1.0 - r) + policy.abs_tol;
        return out;
      }
    } else {
      small_run = 0;
    }
    prev_abs = abs_t;
    last_abs = abs_t;
  }
  throw TruncationError(std::string(series_name) +
                            ": k_max = " + std::to_string(policy.k_max) +
                            " reached before the stopping rule (last |term| = " +
                            std::to_string(last_abs) + ")",
                        acc.value(), policy.k_max);
}

/// Log-space term generator for the basis-weight series
///   w(k) = alpha (log a)^k (alpha + k beta)^{k-1} a^{-(alpha + k beta)} / k!
/// evaluated as exp(log alpha + k log log a + (k-1) log(alpha + k beta)
///                 - (alpha + k beta) log a - lgamma(k+1)).
/// Direct arithmetic overflows near k ~ 200; the log form is finite for
/// k <= 1e6, alpha <= 1e6. k = 0 is the special case a^{-alpha}.
///
/// lgamma(k+1) is maintained incrementally (compensated) from a single seed
/// call, which keeps the per-term cost at two logs and one exp.
///
/// `log_tilt` adds log_tilt * k to the exponent, turning the generator into
/// the term sequence of sum_k w(k, alpha) e^{c k}. Products of a weight and
/// a fast-growing factor must be fused this way: computing them separately
/// underflows the weight to 0 against an overflowing factor.
class WeightTermGen {
 public:
  WeightTermGen(const JainParams& params, double alpha, long k_seed,
                double log_tilt = 0.0)
      : beta_(params.beta()),
        log_a_(params.log_a()),
        log_log_a_(std::log(params.log_a())),
        alpha_(alpha),
        log_alpha_(std::log(alpha)),
        log_tilt_(log_tilt) {
    if (k_seed > 0) lgamma_.add(std::lgamma(static_cast<double>(k_seed) + 1.0));
    next_k_ = k_seed;
  }

  double operator()(long k) {
    sync(k);
    if (k == 0) return std::exp(-alpha_ * log_a_);
    const double kd = static_cast<double>(k);
    const double shifted = alpha_ + kd * beta_;
    const double log_term = log_alpha_ + kd * (log_log_a_ + log_tilt_) +
                            (kd - 1.0) * std::log(shifted) -
                            shifted * log_a_ - lgamma_.value();
    return std::exp(log_term);
  }

  /// log of the k-th term, for window probing.
  double log_at(long k) const {
    if (k == 0) return -alpha_ * log_a_;
    const double kd = static_cast<double>(k);
    const double shifted = alpha_ + kd * beta_;
    return log_alpha_ + kd * (log_log_a_ + log_tilt_) +
           (kd - 1.0) * std::log(shifted) - shifted * log_a_ -
           std::lgamma(kd + 1.0);
  }

 private:
  void sync(long k) {
    // terms are requested at consecutive k; advance lgamma(k+1) by log(k)
    while (next_k_ < k) {
      ++next_k_;
      lgamma_.add(std::log(static_cast<double>(next_k_)));
    }
  }

  double beta_, log_a_, log_log_a_, alpha_, log_alpha_, log_tilt_;
  KahanAccumulator lgamma_;
  long next_k_ = 0;
};

/// Mean of the weight distribution, used as the mode estimate of the term
/// sequence: alpha * log a / (1 - beta log a).
inline double weight_mode_estimate(const JainParams& params, double alpha) {
  return alpha * params.log_a() / (1.0 - params.q());
}

/// Standard deviation of the weight distribution,
/// sqrt(alpha * log a / (1 - beta log a)^3).
inline double weight_sigma(const JainParams& params, double alpha) {
  const double d = 1.0 - params.q();
  return std::sqrt(alpha * params.log_a() / (d * d * d));
}

/// Picks a starting index for a weight-type sum such that the neglected
/// left tail is below ~1e-26 of the total mass. The term sequence is
/// unimodal, so the mass below k_start is at most (k_start+1) times the
/// k_start term. Falls back to 0 whenever the probe term is not tiny.
inline long windowed_start(const WeightTermGen& gen, const JainParams& params,
                           double alpha) {
  const double mean = weight_mode_estimate(params, alpha);
  const double sigma = weight_sigma(params, alpha);
  const long k_start = static_cast<long>(mean - 12.0 * sigma - 32.0);
  if (k_start < 64) return 0;
  if (gen.log_at(k_start) > std::log(1e-30)) return 0;
  return k_start;
}

}  // namespace jain
