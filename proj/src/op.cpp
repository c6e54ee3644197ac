#include "jain/op.hpp"

#include <array>
#include <cmath>
#include <string>

#include "jain/sseries.hpp"
#include "jain/summation.hpp"

namespace jain {

namespace {

void check_exponential_window(const OperatorInstance& op,
                              const FunctionSpec& f) {
  const double q = op.params.q();
  const double rho = q * std::exp(1.0 - q);  // limiting weight-term ratio
  if (const auto* e = std::get_if<Exponential>(&f.node)) {
    if (rho * std::exp(e->rate / static_cast<double>(op.n)) >= 1.0)
      throw DomainError(
          "exp rate " + std::to_string(e->rate) +
          " puts the transformed series outside its convergence window "
          "(beta ln a * e^{1 - beta ln a + rate/n} >= 1)");
  } else if (const auto* w = std::get_if<WeightedSum>(&f.node)) {
    for (const auto& part : w->parts) check_exponential_window(op, part);
  }
}

}  // namespace

double apply_fn(const OperatorInstance& op,
                const std::function<double(double)>& f, double x) {
  if (x < 0.0) throw DomainError("x must be >= 0");
  if (x == 0.0) return f(0.0);
  const double alpha = static_cast<double>(op.n) * x;
  const double inv_n = 1.0 / static_cast<double>(op.n);
  WeightTermGen probe(op.params, alpha, 0);
  const long k_start = windowed_start(probe, op.params, alpha);
  WeightTermGen gen(op.params, alpha, k_start);
  auto term = [&](long k) {
    return gen(k) * f(static_cast<double>(k) * inv_n);
  };
  const long min_k =
      static_cast<long>(std::ceil(weight_mode_estimate(op.params, alpha))) + 1;
  return sum_adaptive(term, k_start, min_k, op.policy, "apply").sum;
}

namespace {

// Index of the largest term of a (possibly tilted) weight sequence, by
// bisection on the sign of the log-increment: increments start positive,
// cross zero once and stay negative.
long term_mode(const WeightTermGen& gen, long hi) {
  long lo = 0;
  if (gen.log_at(1) <= gen.log_at(0)) return 0;
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (gen.log_at(mid + 1) > gen.log_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// sum_k w(k, nx) e^{rate k / n}, fused in log space. Splitting the product
// is not an option for growing rates: the weight underflows to zero against
// an overflowing exponential right where the product peaks.
double apply_exponential(const OperatorInstance& op, double rate, double x) {
  if (x == 0.0) return 1.0;
  const double alpha = static_cast<double>(op.n) * x;
  const double tilt = rate / static_cast<double>(op.n);
  WeightTermGen probe(op.params, alpha, 0, tilt);

  const double q = op.params.q();
  const double rho = std::min(q * std::exp(1.0 - q + tilt), 0.999);
  const double mean_plain = weight_mode_estimate(op.params, alpha);
  double bracket =
      64.0 + 4.0 *
                 std::max(mean_plain,
                          alpha * op.params.log_a() * std::exp(tilt)) /
                 (1.0 - rho);
  // widen until the terms are decaying at the bracket end
  while (bracket < 1e9 &&
         probe.log_at(static_cast<long>(bracket) + 1) >
             probe.log_at(static_cast<long>(bracket)))
    bracket *= 4.0;
  const long mode =
      term_mode(probe, static_cast<long>(std::min(bracket, 2e9)));

  // start past the left tail when it is provably negligible relative to
  // the peak term (terms increase up to the mode)
  long k_start = mode - static_cast<long>(12.0 * weight_sigma(op.params, alpha) *
                                          (1.0 + std::exp(tilt))) -
                 32;
  if (k_start < 64 ||
      probe.log_at(k_start) >= probe.log_at(mode) + std::log(1e-18))
    k_start = 0;

  WeightTermGen gen(op.params, alpha, k_start, tilt);
  return sum_adaptive(gen, k_start, mode + 2, op.policy, "apply").sum;
}

double apply_spec(const OperatorInstance& op, const FunctionSpec& f,
                  double x) {
  if (const auto* e = std::get_if<Exponential>(&f.node))
    return apply_exponential(op, e->rate, x);
  if (const auto* w = std::get_if<WeightedSum>(&f.node)) {
    // operator linearity; each part gets its own truncation
    KahanAccumulator acc;
    for (size_t i = 0; i < w->parts.size(); ++i)
      acc.add(w->weights[i] * apply_spec(op, w->parts[i], x));
    return acc.value();
  }
  return apply_fn(op, [&](double t) { return evaluate(f, t, 0); }, x);
}

}  // namespace

double apply(const OperatorInstance& op, const FunctionSpec& f, double x) {
  check_exponential_window(op, f);
  if (x < 0.0) throw DomainError("x must be >= 0");
  if (x == 0.0) return evaluate(f, 0.0, 0);
  return apply_spec(op, f, x);
}

namespace {

// k^s expanded over falling factorials: k^s = sum_j S2(s,j) k^(j), which
// turns P_n(t^s, x) into (x / n^{s-1}) sum_j S2(s,j) (log a)^j S(j, nx+j b).
constexpr std::array<std::array<double, 5>, 5> kStirling2 = {{
    {1.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 1.0, 0.0, 0.0, 0.0},
    {0.0, 1.0, 1.0, 0.0, 0.0},
    {0.0, 1.0, 3.0, 1.0, 0.0},
    {0.0, 1.0, 7.0, 6.0, 1.0},
}};

double raw_moment_recursion(const OperatorInstance& op, int order, double x) {
  const double alpha = static_cast<double>(op.n) * x;
  if (order == 0) return alpha * (1.0 / alpha);
  const double log_a = op.params.log_a();
  const double beta = op.params.beta();
  double bracket = 0.0;
  double log_a_pow = 1.0;
  for (int j = 1; j <= order; ++j) {
    log_a_pow *= log_a;
    bracket += kStirling2[static_cast<size_t>(order)][static_cast<size_t>(j)] *
               log_a_pow *
               s_series_recursion(j, alpha + j * beta, op.params);
  }
  return x * std::pow(static_cast<double>(op.n), 1 - order) * bracket;
}

double raw_moment_closed(const OperatorInstance& op, int order, double x) {
  const double la = op.params.log_a();
  const double b = op.params.beta();
  const double d = 1.0 - op.params.q();
  const double n = static_cast<double>(op.n);
  const double b2 = b * b, b4 = b2 * b2, b5 = b4 * b, b6 = b5 * b;
  const double la2 = la * la, la3 = la2 * la, la4 = la3 * la, la5 = la4 * la,
               la6 = la5 * la;
  const double d2 = d * d, d3 = d2 * d, d4 = d3 * d, d5 = d4 * d, d6 = d5 * d,
               d7 = d6 * d;
  switch (order) {
    case 0:
      return 1.0;
    case 1:
      return x * la / d;
    case 2:
      return x * x * la2 / d2 + x * la / (n * d3);
    case 3:
      return x * x * x * la3 / d3 + 3.0 * x * x * la2 / (n * d4) +
             x * la * (1.0 + 2.0 * b * la + 2.0 * b4 * la3 - 2.0 * b4 * la4) /
                 (n * n * d5);
    default:
      return x * x * x * x * la4 / d4 + 6.0 * x * x * x * la3 / (n * d5) +
             x * x * la2 *
                 (7.0 + 8.0 * b * la + 2.0 * b4 * la3 - 2.0 * b4 * la4) /
                 (n * n * d6) +
             x *
                 (la + 8.0 * b * la2 + 6.0 * b2 * la3 +
                  (12.0 * b4 * la4 - 16.0 * b5 * la5 + 6.0 * b6 * la6) *
                      (1.0 - la)) /
                 (n * n * n * d7);
  }
}

double central_moment_closed(const OperatorInstance& op, int order, double x) {
  const double la = op.params.log_a();
  const double b = op.params.beta();
  const double d = 1.0 - op.params.q();
  const double n = static_cast<double>(op.n);
  const double b2 = b * b, b4 = b2 * b2, b5 = b4 * b, b6 = b5 * b;
  const double la2 = la * la, la3 = la2 * la, la4 = la3 * la, la5 = la4 * la;
  const double d2 = d * d, d3 = d2 * d, d4 = d3 * d, d5 = d4 * d, d6 = d5 * d,
               d7 = d6 * d;
  const double bp1 = 1.0 + b;
  switch (order) {
    case 1:
      return x * (la + b * la - 1.0) / d;
    case 2:
      return x * la / (n * d3) +
             x * x * (1.0 - 2.0 * bp1 * la + bp1 * bp1 * la2) / d2;
    case 3:
      return x * (la + 2.0 * b * la2 + 2.0 * b4 * la4 - 2.0 * b4 * la5) /
                 (n * n * d5) +
             3.0 * x * x * la * (bp1 * la - 1.0) / (n * d4) +
             x * x * x *
                 (3.0 * la - (3.0 + 6.0 * b) * la2 +
                  (1.0 + 3.0 * b + 3.0 * b2) * la3 - d3) /
                 d3;
    default: {
      const double bp1_2 = bp1 * bp1;
      return x * la *
                 (1.0 + 8.0 * b * la + 6.0 * b2 * la2 +
                  (12.0 * b4 * la3 - 16.0 * b5 * la4 + 6.0 * b6 * la5) *
                      (1.0 - la)) /
                 (n * n * n * d7) +
             x * x * la *
                 ((7.0 - 4.0 * b) * la - 4.0 + 8.0 * b * bp1 * la2 -
                  8.0 * b4 * la3 + 2.0 * b4 * (5.0 + 4.0 * b) * la4 -
                  2.0 * b4 * (1.0 + 4.0 * b) * la5) /
                 (n * n * d6) +
             6.0 * x * x * x * la * (d2 - 2.0 * la + (1.0 + 2.0 * b) * la2) /
                 (n * d5) +
             x * x * x * x *
                 (1.0 - 4.0 * bp1 * la + 6.0 * bp1_2 * la2 -
                  4.0 * bp1_2 * bp1 * la3 + bp1_2 * bp1_2 * la4) /
                 d4;
    }
  }
}

constexpr std::array<std::array<double, 5>, 5> kBinomial = {{
    {1.0, 0.0, 0.0, 0.0, 0.0},
    {1.0, 1.0, 0.0, 0.0, 0.0},
    {1.0, 2.0, 1.0, 0.0, 0.0},
    {1.0, 3.0, 3.0, 1.0, 0.0},
    {1.0, 4.0, 6.0, 4.0, 1.0},
}};

// sum_j C(order,j) (-x)^{order-j} raw_j, compensated
double binomial_combine(int order, double x,
                        const std::array<double, 5>& raw) {
  KahanAccumulator acc;
  for (int j = 0; j <= order; ++j) {
    const double sign_pow = std::pow(-x, order - j);
    acc.add(kBinomial[static_cast<size_t>(order)][static_cast<size_t>(j)] *
            sign_pow * raw[static_cast<size_t>(j)]);
  }
  return acc.value();
}

void check_moment_order(int order, int lo) {
  if (order < lo || order > 4)
    throw UnsupportedOrderError("moment order " + std::to_string(order) +
                                " outside " + std::to_string(lo) + "..4");
}

}  // namespace

MomentReport raw_moment(const OperatorInstance& op, int order, double x) {
  check_moment_order(order, 0);
  MomentReport rep;
  rep.order = order;
  rep.x = x;
  if (x == 0.0) {
    rep.numeric = rep.recursion_path = order == 0 ? 1.0 : 0.0;
    rep.closed_form = raw_moment_closed(op, order, x);
  } else {
    rep.numeric = apply_fn(
        op, [&](double t) { return std::pow(t, order); }, x);
    rep.recursion_path = raw_moment_recursion(op, order, x);
    rep.closed_form = raw_moment_closed(op, order, x);
  }
  rep.rel_err_numeric_vs_recursion =
      rel_deviation(rep.numeric, rep.recursion_path);
  rep.rel_err_numeric_vs_closed = rel_deviation(rep.numeric, rep.closed_form);
  return rep;
}

MomentReport central_moment(const OperatorInstance& op, int order, double x) {
  check_moment_order(order, 1);
  MomentReport rep;
  rep.order = order;
  rep.x = x;
  if (x == 0.0) {
    rep.numeric = 0.0;
    rep.recursion_path = 0.0;
  } else {
    rep.numeric = apply_fn(
        op, [&](double t) { return std::pow(t - x, order); }, x);
    std::array<double, 5> raw_rec{};
    for (int j = 0; j <= order; ++j)
      raw_rec[static_cast<size_t>(j)] = raw_moment_recursion(op, j, x);
    rep.recursion_path = binomial_combine(order, x, raw_rec);
  }
  rep.closed_form = central_moment_closed(op, order, x);
  rep.rel_err_numeric_vs_recursion =
      rel_deviation(rep.numeric, rep.recursion_path);
  rep.rel_err_numeric_vs_closed = rel_deviation(rep.numeric, rep.closed_form);
  return rep;
}

double central_moment_binomial(const OperatorInstance& op, int order,
                               double x) {
  check_moment_order(order, 1);
  if (x == 0.0) return 0.0;
  std::array<double, 5> raw{};
  for (int j = 0; j <= order; ++j)
    raw[static_cast<size_t>(j)] = raw_moment(op, j, x).numeric;
  return binomial_combine(order, x, raw);
}

}  // namespace jain
