#pragma once

#include "jain/params.hpp"

namespace jain {

/// Auxiliary series
///   S(r, alpha, beta, a)
///     = sum_k (log a)^k (alpha + beta k)^{k+r-1} a^{-(alpha + beta k)} / k!
/// with alpha * S(0, alpha, beta, a) = 1. All moment identities of the
/// operator assemble from S values, so the library evaluates S by three
/// independent routes and tests them against each other:
///   - s_series_sum        direct truncated summation (ground truth),
///   - s_series_recursion  the descent S(r) -> S(r-1) down to S(0) = 1/alpha,
///   - s_series_closed     the printed closed forms for r = 1..4, verbatim,
///                         typos included; detecting discrepancies is a
///                         test concern, not this function's.

/// Direct summation of the definition. r >= 0.
double s_series_sum(int r, double alpha, const JainParams& params,
                    const TruncationPolicy& policy);

/// Evaluates S(r, ...) through the recursion
///   S(r, alpha) = sum_k (beta log a)^k (alpha + k beta) S(r-1, alpha + k beta)
/// terminating each branch at S(0, alpha) = 1/alpha. `depth` caps the outer
/// k-sum of every level; the per-level tail is cut off once terms fall below
/// rel_tol relative to the partial sum. r >= 1.
double s_series_recursion(int r, double alpha, const JainParams& params,
                          long depth = 10000, double rel_tol = 1e-14);

/// The printed closed forms, r in 1..4 only.
double s_series_closed(int r, double alpha, const JainParams& params);

}  // namespace jain
