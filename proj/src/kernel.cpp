#include "jain/kernel.hpp"

#include <cmath>
#include <string>

namespace jain {

namespace {

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0))
    throw DomainError("alpha = " + std::to_string(alpha) + " must be > 0");
}

}  // namespace

double weight(const JainParams& params, double alpha, long k) {
  require_positive_alpha(alpha);
  if (k < 0) throw DomainError("k must be >= 0");
  if (k == 0) return std::exp(-alpha * params.log_a());
  WeightTermGen gen(params, alpha, k);
  return gen(k);
}

WeightTail weight_sum(const JainParams& params, double alpha,
                      const TruncationPolicy& policy) {
  require_positive_alpha(alpha);
  WeightTermGen gen(params, alpha, 0);
  const long min_k =
      static_cast<long>(std::ceil(weight_mode_estimate(params, alpha))) + 1;
  const SeriesResult r =
      sum_adaptive(gen, 0, min_k, policy, "weight_sum");
  return WeightTail{r.sum, r.k_used, r.tail_estimate};
}

double generating_identity_residual(const JainParams& params, double alpha,
                                    double z, const TruncationPolicy& policy) {
  require_positive_alpha(alpha);
  const double beta = params.beta();
  const double log_a = params.log_a();
  const double u = z * std::exp(-beta * z * log_a);
  if (!(std::fabs(beta * z) < 1.0))
    throw DomainError("|beta z| = " + std::to_string(std::fabs(beta * z)) +
                      " not below 1");
  if (!(std::fabs(beta * u) < 1.0 / params.a()))
    throw DomainError("|beta u| = " + std::to_string(std::fabs(beta * u)) +
                      " not below 1/a = " + std::to_string(1.0 / params.a()));

  // term_k = alpha (log a)^k (alpha + beta k)^{k-1} u^k / k!, signed by u^k
  const double w = std::fabs(u) * log_a;  // per-index magnitude base
  const double log_alpha = std::log(alpha);
  const double log_w = std::log(w);
  const bool negative_u = u < 0.0;
  KahanAccumulator lgamma_acc;
  auto term = [&](long k) -> double {
    if (k == 0) return 1.0;
    const double kd = static_cast<double>(k);
    lgamma_acc.add(std::log(kd));  // lgamma(k+1)
    if (w == 0.0) return 0.0;
    const double shifted = alpha + beta * kd;
    const double magnitude = std::exp(log_alpha + kd * log_w +
                                      (kd - 1.0) * std::log(shifted) -
                                      lgamma_acc.value());
    return (negative_u && (k & 1)) ? -magnitude : magnitude;
  };

  // Terms peak near alpha*w/(1 - rho) with rho = beta*w*e the limiting
  // term ratio; rho < 1 everywhere inside the validity window.
  const double rho = std::min(beta * w * kEulerE, 0.999);
  const long min_k =
      static_cast<long>(std::ceil(kEulerE * alpha * w / (1.0 - rho))) + 4;
  const SeriesResult r =
      sum_adaptive(term, 0, min_k, policy, "generating_identity");
  return std::fabs(std::exp(alpha * z * log_a) - r.sum);
}

}  // namespace jain
