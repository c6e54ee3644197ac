#pragma once

#include <functional>

#include "jain/funcspec.hpp"
#include "jain/kernel.hpp"
#include "jain/params.hpp"

namespace jain {

/// One member of the operator family: P_n f (x) = sum_k w(k, nx) f(k/n).
struct OperatorInstance {
  JainParams params;
  long n = 1;
  TruncationPolicy policy;

  OperatorInstance(JainParams params, long n,
                   TruncationPolicy policy = TruncationPolicy())
      : params(params), n(n), policy(policy) {
    if (n < 1) throw DomainError("operator index n must be >= 1");
    policy.check();
  }
};

/// Per-order comparison of the three moment evaluation paths. `numeric`
/// (the truncated series) is the authoritative value; the closed forms are
/// hypotheses under test.
struct MomentReport {
  int order = 0;
  double x = 0.0;
  double numeric = 0.0;
  double recursion_path = 0.0;
  double closed_form = 0.0;
  double rel_err_numeric_vs_recursion = 0.0;
  double rel_err_numeric_vs_closed = 0.0;
};

/// |a - b| / max(1, |a|), the comparison scale used throughout.
inline double rel_deviation(double a, double b) {
  return std::fabs(a - b) / std::max(1.0, std::fabs(a));
}

/// Applies the operator to f at x >= 0. At x = 0 the distribution
/// degenerates to the point mass at k = 0 and the value is f(0) exactly.
/// Exponential parts with rates placing the transformed series outside its
/// convergence window are rejected.
double apply(const OperatorInstance& op, const FunctionSpec& f, double x);

/// Applies the operator to an arbitrary callable (no convergence screening;
/// the caller is responsible for growth). Used by the moment paths and by
/// sup-error sweeps.
double apply_fn(const OperatorInstance& op,
                const std::function<double(double)>& f, double x);

/// Raw moment P_n(t^order, x), order in 0..4.
MomentReport raw_moment(const OperatorInstance& op, int order, double x);

/// Central moment P_n((t-x)^order, x), order in 1..4. `numeric` sums
/// (k/n - x)^order directly (well conditioned); the recursion and closed
/// paths follow the printed identities.
MomentReport central_moment(const OperatorInstance& op, int order, double x);

/// Central moment assembled binomially from raw numeric moments with
/// compensated summation. Cancels for large n; kept as the cross-check of
/// the direct path.
double central_moment_binomial(const OperatorInstance& op, int order,
                               double x);

}  // namespace jain
