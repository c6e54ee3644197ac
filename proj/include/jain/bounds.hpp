#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jain/funcspec.hpp"
#include "jain/op.hpp"
#include "jain/params.hpp"

namespace jain {

/// Which quantitative bound a check exercised.
enum class BoundKind {
  kModulus,                  // sup error vs modulus-of-continuity bound
  kDerivativeModulus,        // sup error vs bound through the modulus of f'
  kLocalLipschitz,           // pointwise error vs local Lipschitz bound
  kFourthMomentIntermediate, // fourth central moment vs four-term bound
  kFourthMomentConsolidated, // fourth central moment vs consolidated bound
};

std::string to_string(BoundKind kind);

/// Outcome of one domination check. satisfied <=> actual <= bound + 1e-10.
struct BoundCheck {
  BoundKind kind = BoundKind::kModulus;
  double beta = 0.0;
  double a = 0.0;
  long n = 0;
  double x_or_lambda = 0.0;
  double actual = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  double margin = 0.0;
};

BoundCheck make_bound_check(BoundKind kind, const JainParams& params, long n,
                            double x_or_lambda, double actual, double bound);

/// Error bound through the modulus of continuity on [0, lambda]:
///   (1 + sqrt(lambda (1 + lambda beta beta') / (1 - beta log a)^3))
///     * omega(1/sqrt(n)).
/// Requires 1 > beta'/n >= beta >= 0.
double modulus_error_bound(const JainParams& params, long n, double lambda,
                           double beta_prime, const FunctionSpec& f);

/// Error bound for C^1 functions through the modulus of f':
///   sqrt(A) (1 + sqrt(A / delta)) omega_1(delta),
///   A = lambda (1 + lambda beta beta') / (n (1 - beta log a)^3).
/// The canonical choice is delta = 1/sqrt(n).
double derivative_modulus_error_bound(const JainParams& params, long n,
                                      double lambda, double beta_prime,
                                      const FunctionSpec& f, double delta);

/// Exponent reading for the local Lipschitz constant factor: the printed
/// form shows power eta, the derivation applies power eta/2 to the second
/// moment. Default is the eta/2 reading.
enum class LipExponentReading { kEtaHalf, kEta };

/// Pointwise bound for functions locally Lipschitz of order eta on E:
///   M_f C max{x^{eta/2}, x^eta} + 2 M_f d(x,E)^eta,
///   C = (1/(n (1-beta log a)^3) + beta^2/(1-beta log a)^2)^p.
double local_lipschitz_error_bound(
    const JainParams& params, long n, double x, double eta, double m_f,
    double dist, LipExponentReading reading = LipExponentReading::kEtaHalf);

/// Exact distance from x to a finite union of closed intervals.
double distance_to_intervals(
    const std::vector<std::pair<double, double>>& intervals, double x);

struct FourthMomentBound {
  double intermediate = 0.0;  // 15x/(n^3 D^7) + 19x^2/(n^2 D^6) + 6x^3/(n D^5) + x^4/D^4
  double consolidated = 0.0;  // 41 (x + x^2 + x^3 + x^4) / (n^3 D^7)
};

FourthMomentBound fourth_central_moment_bound(const JainParams& params, long n,
                                              double x);

/// Sup of |P_n f - f| over an (n_points)-point uniform grid of [lo, hi],
/// enlarged by golden-section refinement around the grid maximizer. A grid
/// sup underestimates the true sup, which is the safe direction for
/// domination tests; refinement narrows the gap.
double sup_error_on_grid(const OperatorInstance& op, const FunctionSpec& f,
                         double lo, double hi, int n_points = 512,
                         bool refine = true);

}  // namespace jain
