#include "jain/statconv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "jain/op.hpp"

namespace jain {

IndexSet IndexSet::from_predicate(const std::function<bool(long)>& pred,
                                  long horizon) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  IndexSet s;
  s.horizon_ = horizon;
  for (long n = 1; n <= horizon; ++n)
    if (pred(n)) s.members_.push_back(n);
  return s;
}

IndexSet IndexSet::squares(long horizon) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  IndexSet s;
  s.horizon_ = horizon;
  for (long k = 1; k * k <= horizon; ++k) s.members_.push_back(k * k);
  return s;
}

IndexSet IndexSet::evens(long horizon) {
  return from_predicate([](long n) { return n % 2 == 0; }, horizon);
}

IndexSet IndexSet::empty(long horizon) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  IndexSet s;
  s.horizon_ = horizon;
  return s;
}

bool IndexSet::contains(long n) const {
  return std::binary_search(members_.begin(), members_.end(), n);
}

long IndexSet::count_up_to(long h) const {
  if (h > horizon_)
    throw DomainError("count_up_to beyond the materialization horizon");
  return static_cast<long>(
      std::upper_bound(members_.begin(), members_.end(), h) -
      members_.begin());
}

double density(const IndexSet& s, long horizon) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  return static_cast<double>(s.count_up_to(horizon)) /
         static_cast<double>(horizon);
}

std::vector<std::pair<long, double>> stat_limit_check(
    const StatSequence& seq, double limit, double epsilon,
    const std::vector<long>& horizons) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (horizons.empty()) throw DomainError("need at least one horizon");
  for (size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw DomainError("horizons must be increasing");
  const long max_h = horizons.back();
  std::vector<long> bad_prefix(static_cast<size_t>(max_h) + 1, 0);
  for (long n = 1; n <= max_h; ++n)
    bad_prefix[static_cast<size_t>(n)] =
        bad_prefix[static_cast<size_t>(n - 1)] +
        (std::fabs(seq.value(n) - limit) >= epsilon ? 1 : 0);
  std::vector<std::pair<long, double>> out;
  out.reserve(horizons.size());
  for (long h : horizons)
    out.emplace_back(h, static_cast<double>(bad_prefix[static_cast<size_t>(h)]) /
                            static_cast<double>(h));
  return out;
}

StatConvergenceResult stat_convergence_experiment(
    const StatSequence& seq_beta, const StatSequence& seq_a,
    const FunctionSpec& f, double c, double d, double epsilon,
    const std::vector<long>& horizons, const TruncationPolicy& policy,
    int grid_points, unsigned threads) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (!(c >= 0.0) || !(d > c)) throw DomainError("bad interval [c, d]");
  if (horizons.empty()) throw DomainError("need at least one horizon");
  for (size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw DomainError("horizons must be increasing");
  const long max_h = horizons.back();

  // validate the whole parameter sequence up front
  std::vector<JainParams> params;
  params.reserve(static_cast<size_t>(max_h));
  for (long n = 1; n <= max_h; ++n) {
    const double beta_n = seq_beta.value(n);
    const double a_n = seq_a.value(n);
    if (auto reason = JainParams::validate(beta_n, a_n))
      throw DomainError("parameter sequence invalid at n = " +
                        std::to_string(n) + ": " + *reason);
    params.emplace_back(beta_n, a_n);
  }

  std::vector<double> grid(static_cast<size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i)
    grid[static_cast<size_t>(i)] =
        c + (d - c) * static_cast<double>(i) /
                static_cast<double>(grid_points - 1);

  std::vector<double> sup_errors(static_cast<size_t>(max_h), 0.0);
  std::atomic<long> truncation_failures{0};
  const auto eval_index = [&](long n) {
    const OperatorInstance op(params[static_cast<size_t>(n - 1)], n, policy);
    double sup = 0.0;
    try {
      for (double x : grid)
        sup = std::max(sup, std::fabs(apply(op, f, x) - evaluate(f, x, 0)));
    } catch (const TruncationError&) {
      sup = std::numeric_limits<double>::infinity();  // counted as bad
      truncation_failures.fetch_add(1, std::memory_order_relaxed);
    }
    sup_errors[static_cast<size_t>(n - 1)] = sup;
  };

  unsigned n_threads = threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : threads;
  n_threads = std::min<unsigned>(n_threads, 16);
  if (n_threads <= 1 || max_h < 64) {
    for (long n = 1; n <= max_h; ++n) eval_index(n);
  } else {
    // interleaved strides balance the load (cost grows with n)
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t]() {
        for (long n = 1 + static_cast<long>(t); n <= max_h;
             n += static_cast<long>(n_threads))
          eval_index(n);
      });
    for (auto& th : pool) th.join();
  }

  StatConvergenceResult out;
  out.horizons = horizons;
  out.beta_n.reserve(params.size());
  out.a_n.reserve(params.size());
  for (const auto& p : params) {
    out.beta_n.push_back(p.beta());
    out.a_n.push_back(p.a());
  }
  out.sup_errors = std::move(sup_errors);
  out.truncation_failures = truncation_failures.load();
  long bad = 0;
  size_t next = 0;
  for (long n = 1; n <= max_h; ++n) {
    if (out.sup_errors[static_cast<size_t>(n - 1)] >= epsilon) ++bad;
    if (next < horizons.size() && n == horizons[next]) {
      out.bad_counts.push_back(bad);
      out.bad_densities.push_back(static_cast<double>(bad) /
                                  static_cast<double>(n));
      ++next;
    }
  }
  return out;
}

}  // namespace jain
