#pragma once

#include "jain/params.hpp"
#include "jain/summation.hpp"

namespace jain {

/// Basis weight w_{beta,a}(k, alpha)
///   = alpha (log a)^k (alpha + k beta)^{k-1} a^{-(alpha + k beta)} / k!.
/// Nonnegative for all k; log-space evaluation, never overflows for
/// k <= 1e6, alpha <= 1e6.
double weight(const JainParams& params, double alpha, long k);

/// Sums the basis weights over k (from k = 0, in increasing k) under the
/// given policy. The partial sum equals 1 up to the reported tail estimate;
/// this is the partition-of-unity identity.
WeightTail weight_sum(const JainParams& params, double alpha,
                      const TruncationPolicy& policy);

/// Residual |a^{alpha z} - sum_k alpha (log a)^k (alpha + beta k)^{k-1}
/// u^k / k!| with u = z a^{-beta z}. Only defined inside the validity
/// window |beta z| < 1 and |beta u| < 1/a; outside it the series may
/// diverge and a DomainError is raised instead of summing.
double generating_identity_residual(const JainParams& params, double alpha,
                                    double z, const TruncationPolicy& policy);

}  // namespace jain
