#include "jain/sseries.hpp"

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "jain/summation.hpp"

namespace jain {

namespace {

void check_order_and_alpha(int r, int r_min, double alpha) {
  if (r < r_min)
    throw UnsupportedOrderError("series order r = " + std::to_string(r) +
                                " must be >= " + std::to_string(r_min));
  if (!(alpha > 0.0))
    throw DomainError("alpha = " + std::to_string(alpha) + " must be > 0");
}

}  // namespace

double s_series_sum(int r, double alpha, const JainParams& params,
                    const TruncationPolicy& policy) {
  check_order_and_alpha(r, 0, alpha);
  const double beta = params.beta();
  const double log_a = params.log_a();
  const double log_log_a = std::log(log_a);
  KahanAccumulator lgamma_acc;
  auto term = [&](long k) -> double {
    const double kd = static_cast<double>(k);
    if (k > 0) lgamma_acc.add(std::log(kd));
    const double shifted = alpha + beta * kd;
    return std::exp(kd * log_log_a + (kd + r - 1.0) * std::log(shifted) -
                    shifted * log_a - lgamma_acc.value());
  };
  const long min_k =
      static_cast<long>(std::ceil(weight_mode_estimate(params, alpha))) + r + 1;
  return sum_adaptive(term, 0, min_k, policy, "s_series_sum").sum;
}

namespace {

// Recursion state: every argument reachable from (r, alpha) has the form
// alpha + m*beta, so values memoize on (level, m).
class SRecursion {
 public:
  SRecursion(double alpha, const JainParams& params, long depth,
             double rel_tol)
      : alpha_(alpha),
        beta_(params.beta()),
        q_(params.q()),
        depth_(depth),
        rel_tol_(rel_tol),
        memo_() {}

  double eval(int level, long m) {
    if (level == 0) return 1.0 / (alpha_ + static_cast<double>(m) * beta_);
    const long long key = static_cast<long long>(level) * (1LL << 40) + m;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    KahanAccumulator acc;
    double q_pow = 1.0;
    int small_run = 0;
    bool converged = false;
    for (long k = 0; k < depth_; ++k) {
      const double arg = alpha_ + static_cast<double>(m + k) * beta_;
      const double term = q_pow * arg * eval(level - 1, m + k);
      acc.add(term);
      if (std::fabs(term) <= rel_tol_ * std::fabs(acc.value()) && k >= 4) {
        if (++small_run >= 3) {
          converged = true;
          break;
        }
      } else {
        small_run = 0;
      }
      q_pow *= q_;
      if (q_pow == 0.0) {  // beta = 0 collapses the outer sum to k = 0
        converged = true;
        break;
      }
    }
    if (!converged)
      throw TruncationError(
          "s_series_recursion: depth = " + std::to_string(depth_) +
              " insufficient for rel_tol convergence at level " +
              std::to_string(level),
          acc.value(), depth_);
    memo_.emplace(key, acc.value());
    return acc.value();
  }

 private:
  double alpha_, beta_, q_;
  long depth_;
  double rel_tol_;
  std::unordered_map<long long, double> memo_;
};

}  // namespace

double s_series_recursion(int r, double alpha, const JainParams& params,
                          long depth, double rel_tol) {
  check_order_and_alpha(r, 1, alpha);
  if (depth < 1) throw DomainError("depth must be >= 1");
  SRecursion rec(alpha, params, depth, rel_tol);
  return rec.eval(r, 0);
}

double s_series_closed(int r, double alpha, const JainParams& params) {
  check_order_and_alpha(r, 1, alpha);
  if (r > 4)
    throw UnsupportedOrderError("no printed closed form for r = " +
                                std::to_string(r));
  const double b = params.beta();
  const double la = params.log_a();
  const double d = 1.0 - params.q();
  const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b, b6 = b5 * b;
  switch (r) {
    case 1:
      return 1.0 / d;
    case 2:
      return alpha / (d * d) + b2 * la / (d * d * d);
    case 3:
      return alpha * alpha / (d * d * d) +
             3.0 * alpha * b2 * la / (d * d * d * d) +
             (b3 + 2.0 * b4) * la / (d * d * d * d * d);
    default: {
      const double d4 = d * d * d * d;
      return alpha * alpha * alpha / d4 +
             6.0 * alpha * alpha * b2 * la / (d4 * d) +
             (2.0 * alpha * b3 * (2.0 + b) * la +
              9.0 * alpha * b4 * la * la) /
                 (d4 * d * d) +
             (b4 * la + 2.0 * b5 * (4.0 + b) * la * la +
              4.0 * b6 * la * la * la) /
                 (d4 * d * d * d);
    }
  }
}

}  // namespace jain
