#include "jain/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jain/bounds.hpp"

namespace jain {

ParamLadder ParamLadder::constant(double beta, double a) {
  ParamLadder l;
  l.rule_ = Constant{beta, a};
  return l;
}

ParamLadder ParamLadder::decay(double c, double d) {
  if (!(c >= 0.0) || !(d >= 0.0)) throw DomainError("decay rates must be >= 0");
  ParamLadder l;
  l.rule_ = Decay{c, d};
  return l;
}

ParamLadder ParamLadder::custom(std::vector<JainParams> pairs) {
  if (pairs.empty()) throw DomainError("custom ladder must be nonempty");
  ParamLadder l;
  l.rule_ = Custom{std::move(pairs)};
  return l;
}

bool ParamLadder::is_constant() const {
  return std::holds_alternative<Constant>(rule_);
}

JainParams ParamLadder::at(long n, size_t idx) const {
  if (const auto* c = std::get_if<Constant>(&rule_))
    return JainParams(c->beta, c->a);
  if (const auto* d = std::get_if<Decay>(&rule_)) {
    const double nd = static_cast<double>(n);
    if (auto reason = JainParams::validate(d->c / nd,
                                           std::exp(1.0 - d->d / nd)))
      throw DomainError("decay ladder invalid at n = " + std::to_string(n) +
                        ": " + *reason);
    return JainParams(d->c / nd, std::exp(1.0 - d->d / nd));
  }
  const auto& pairs = std::get<Custom>(rule_).pairs;
  if (idx >= pairs.size())
    throw DomainError("custom ladder shorter than the n-value list");
  return pairs[idx];
}

std::vector<std::pair<long, double>> uniform_convergence_trace(
    const ParamLadder& ladder, const FunctionSpec& f, double lo, double hi,
    const std::vector<long>& n_values, const TruncationPolicy& policy) {
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("bad interval");
  std::vector<std::pair<long, double>> out;
  out.reserve(n_values.size());
  for (size_t i = 0; i < n_values.size(); ++i) {
    const long n = n_values[i];
    const OperatorInstance op(ladder.at(n, i), n, policy);
    try {
      out.emplace_back(n, sup_error_on_grid(op, f, lo, hi));
    } catch (const TruncationError& e) {
      throw TruncationError("uniform_convergence_trace at n = " +
                                std::to_string(n) + ": " + e.what(),
                            e.partial_sum, e.k_used);
    }
  }
  return out;
}

VoronovskayaTrace voronovskaya_trace(const ParamLadder& ladder,
                                     const FunctionSpec& f, double x,
                                     const std::vector<long>& n_values,
                                     const TruncationPolicy& policy) {
  if (!(x > 0.0)) throw DomainError("voronovskaya trace needs x > 0");
  if (smoothness_order(f) < 2)
    throw NondifferentiableError("voronovskaya trace needs a C^2 function");
  VoronovskayaTrace trace;
  trace.target = x * evaluate(f, x, 2) / 2.0;
  const double fx = evaluate(f, x, 0);
  for (size_t i = 0; i < n_values.size(); ++i) {
    const long n = n_values[i];
    const JainParams params = ladder.at(n, i);
    const OperatorInstance op(params, n, policy);
    const double nd = static_cast<double>(n);
    const double residual = nd * (apply(op, f, x) - fx);
    const double drift =
        nd * apply_fn(op, [&](double t) { return t - x; }, x);
    trace.n_values.push_back(n);
    trace.beta_n.push_back(params.beta());
    trace.a_n.push_back(params.a());
    trace.scaled_residuals.push_back(residual);
    trace.drifts.push_back(drift);
  }
  trace.extrapolated_limit =
      richardson_extrapolate(trace.n_values, trace.scaled_residuals);
  return trace;
}

double second_derivative_fd(const FunctionSpec& f, double x) {
  if (smoothness_order(f) < 2)
    throw NondifferentiableError("finite difference needs a C^2 function");
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                   std::max(1.0, std::fabs(x));
  return (evaluate(f, x + h, 0) - 2.0 * evaluate(f, x, 0) +
          evaluate(f, x - h, 0)) /
         (h * h);
}

double richardson_extrapolate(const std::vector<long>& n_values,
                              const std::vector<double>& values) {
  if (n_values.size() != values.size() || values.empty())
    throw DomainError("extrapolation needs equally many n and values");
  const size_t take = std::min<size_t>(3, values.size());
  const size_t start = values.size() - take;
  // Neville tableau in h = 1/n evaluated at h = 0
  std::vector<double> h(take), p(take);
  for (size_t i = 0; i < take; ++i) {
    h[i] = 1.0 / static_cast<double>(n_values[start + i]);
    p[i] = values[start + i];
  }
  for (size_t level = 1; level < take; ++level)
    for (size_t i = 0; i + level < take; ++i)
      p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
  return p[0];
}

}  // namespace jain
