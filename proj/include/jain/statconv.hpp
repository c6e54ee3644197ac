#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jain/funcspec.hpp"
#include "jain/params.hpp"

namespace jain {

/// A set of positive integers, materialized as a sorted list up to a
/// horizon.
class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet from_predicate(const std::function<bool(long)>& pred,
                                 long horizon);
  static IndexSet squares(long horizon);
  static IndexSet evens(long horizon);
  static IndexSet empty(long horizon);

  bool contains(long n) const;
  /// |S intersect [1, h]|; h must not exceed the materialization horizon.
  long count_up_to(long h) const;
  long horizon() const { return horizon_; }
  const std::vector<long>& members() const { return members_; }

 private:
  std::vector<long> members_;
  long horizon_ = 0;
};

/// Finite-horizon empirical density (1/h) |S intersect [1, h]|.
double density(const IndexSet& s, long horizon);

/// A sequence x_n defined by a base rule with exceptional values on an
/// index set (the canonical witness: 1/n with value 1/2 on the perfect
/// squares, statistically but not ordinarily convergent to 0).
struct StatSequence {
  std::function<double(long)> base;
  IndexSet exceptions;
  std::function<double(long)> exception_value;
  std::string base_desc;
  std::string exception_desc;

  double value(long n) const {
    return exceptions.contains(n) ? exception_value(n) : base(n);
  }
};

/// For each horizon h: density of {n <= h : |x_n - L| >= epsilon}.
/// Statistical convergence to L is evidenced by this decreasing toward 0.
std::vector<std::pair<long, double>> stat_limit_check(
    const StatSequence& seq, double limit, double epsilon,
    const std::vector<long>& horizons);

struct StatConvergenceResult {
  std::vector<long> horizons;
  std::vector<long> bad_counts;
  std::vector<double> bad_densities;
  // per-index trace, n = 1 .. max horizon
  std::vector<double> beta_n;
  std::vector<double> a_n;
  std::vector<double> sup_errors;
  long truncation_failures = 0;  // indices counted as bad conservatively
};

/// The statistical-convergence experiment: for every n up to the largest
/// horizon, evaluates e_n = sup of |P_n^{[beta_n, a_n]} f - f| over a
/// 64-point grid of [c, d] and returns the bad-set densities
/// {n : e_n >= epsilon} per horizon. The per-index loop is the hot path and
/// is distributed over threads (results are deterministic; each index is
/// pure). threads = 0 picks the hardware count.
StatConvergenceResult stat_convergence_experiment(
    const StatSequence& seq_beta, const StatSequence& seq_a,
    const FunctionSpec& f, double c, double d, double epsilon,
    const std::vector<long>& horizons,
    const TruncationPolicy& policy = TruncationPolicy(), int grid_points = 64,
    unsigned threads = 0);

}  // namespace jain
