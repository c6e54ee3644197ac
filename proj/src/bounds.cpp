#include "jain/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jain {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kModulus: return "modulus";
    case BoundKind::kDerivativeModulus: return "derivative_modulus";
    case BoundKind::kLocalLipschitz: return "local_lipschitz";
    case BoundKind::kFourthMomentIntermediate:
      return "fourth_moment_intermediate";
    case BoundKind::kFourthMomentConsolidated:
      return "fourth_moment_consolidated";
  }
  return "unknown";
}

BoundCheck make_bound_check(BoundKind kind, const JainParams& params, long n,
                            double x_or_lambda, double actual, double bound) {
  BoundCheck c;
  c.kind = kind;
  c.beta = params.beta();
  c.a = params.a();
  c.n = n;
  c.x_or_lambda = x_or_lambda;
  c.actual = actual;
  c.bound = bound;
  c.satisfied = actual <= bound + 1e-10;
  c.margin = bound - actual;
  return c;
}

namespace {

void check_beta_prime_condition(const JainParams& params, long n,
                                double beta_prime) {
  const double ratio = beta_prime / static_cast<double>(n);
  if (!(ratio < 1.0))
    throw ConditionError("beta'/n = " + std::to_string(ratio) +
                         " violates beta'/n < 1");
  if (!(ratio >= params.beta()))
    throw ConditionError("beta'/n = " + std::to_string(ratio) +
                         " violates beta'/n >= beta = " +
                         std::to_string(params.beta()));
}

}  // namespace

double modulus_error_bound(const JainParams& params, long n, double lambda,
                           double beta_prime, const FunctionSpec& f) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  check_beta_prime_condition(params, n, beta_prime);
  const double d = 1.0 - params.q();
  const double delta = 1.0 / std::sqrt(static_cast<double>(n));
  const double omega = modulus_of_continuity(f, lambda, delta).value;
  const double factor =
      std::sqrt(lambda * (1.0 + lambda * params.beta() * beta_prime) /
                (d * d * d));
  return (1.0 + factor) * omega;
}

double derivative_modulus_error_bound(const JainParams& params, long n,
                                      double lambda, double beta_prime,
                                      const FunctionSpec& f, double delta) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  if (!(delta > 0.0)) throw DomainError("delta must be > 0");
  if (smoothness_order(f) < 1)
    throw NondifferentiableError(
        "bound through the modulus of f' needs a C^1 function");
  check_beta_prime_condition(params, n, beta_prime);
  const double d = 1.0 - params.q();
  const double A = lambda * (1.0 + lambda * params.beta() * beta_prime) /
                   (static_cast<double>(n) * d * d * d);
  const double omega1 = modulus_of_continuity(f, lambda, delta, 1).value;
  return std::sqrt(A) * (1.0 + std::sqrt(A / delta)) * omega1;
}

double local_lipschitz_error_bound(const JainParams& params, long n, double x,
                                   double eta, double m_f, double dist,
                                   LipExponentReading reading) {
  if (!(eta > 0.0) || !(eta <= 1.0))
    throw DomainError("eta must be in (0, 1]");
  if (x < 0.0) throw DomainError("x must be >= 0");
  if (dist < 0.0) throw DomainError("d(x, E) must be >= 0");
  const double d = 1.0 - params.q();
  const double beta = params.beta();
  const double base = 1.0 / (static_cast<double>(n) * d * d * d) +
                      beta * beta / (d * d);
  const double p = reading == LipExponentReading::kEtaHalf ? eta / 2.0 : eta;
  const double c = std::pow(base, p);
  const double x_factor = std::max(std::pow(x, eta / 2.0), std::pow(x, eta));
  return m_f * c * x_factor + 2.0 * m_f * std::pow(dist, eta);
}

double distance_to_intervals(
    const std::vector<std::pair<double, double>>& intervals, double x) {
  if (intervals.empty()) throw DomainError("E must be nonempty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : intervals) {
    if (!(lo <= hi)) throw DomainError("interval with lo > hi");
    if (x < lo)
      best = std::min(best, lo - x);
    else if (x > hi)
      best = std::min(best, x - hi);
    else
      return 0.0;
  }
  return best;
}

FourthMomentBound fourth_central_moment_bound(const JainParams& params, long n,
                                              double x) {
  if (x < 0.0) throw DomainError("x must be >= 0");
  const double d = 1.0 - params.q();
  const double nd = static_cast<double>(n);
  const double d4 = d * d * d * d, d5 = d4 * d, d6 = d5 * d, d7 = d6 * d;
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  FourthMomentBound out;
  out.intermediate = 15.0 * x / (nd * nd * nd * d7) +
                     19.0 * x2 / (nd * nd * d6) + 6.0 * x3 / (nd * d5) +
                     x4 / d4;
  out.consolidated = 41.0 * (x + x2 + x3 + x4) / (nd * nd * nd * d7);
  return out;
}

namespace {

template <class G>
double golden_max(G&& g, double lo, double hi, int iters = 60) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters && (b - a) > 1e-13 * std::max(1.0, std::fabs(b));
       ++i) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return std::max(gc, gd);
}

}  // namespace

double sup_error_on_grid(const OperatorInstance& op, const FunctionSpec& f,
                         double lo, double hi, int n_points, bool refine) {
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("bad interval");
  if (n_points < 2) throw DomainError("need at least 2 grid points");
  const auto err = [&](double x) {
    return std::fabs(apply(op, f, x) - evaluate(f, x, 0));
  };
  const double step = (hi - lo) / static_cast<double>(n_points - 1);
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i < n_points; ++i) {
    const double v = err(lo + static_cast<double>(i) * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (refine) {
    const double rlo = std::max(lo, lo + static_cast<double>(best_i - 1) * step);
    const double rhi = std::min(hi, lo + static_cast<double>(best_i + 1) * step);
    best = std::max(best, golden_max(err, rlo, rhi));
  }
  return best;
}

}  // namespace jain
