#pragma once

#include <variant>
#include <vector>

#include "jain/funcspec.hpp"
#include "jain/op.hpp"
#include "jain/params.hpp"

namespace jain {

/// Rule producing the parameter pair for each operator index n.
class ParamLadder {
 public:
  /// beta_n = beta, a_n = a for every n.
  static ParamLadder constant(double beta, double a);
  /// beta_n = c/n, a_n = e^{1 - d/n}; tends to (0, e).
  static ParamLadder decay(double c, double d);
  /// Explicit pairs aligned by position with the n-values of a trace.
  static ParamLadder custom(std::vector<JainParams> pairs);

  /// Parameters at index n (idx = position within the trace, used by the
  /// custom rule). Throws DomainError when the generated pair is invalid.
  JainParams at(long n, size_t idx) const;

  bool is_constant() const;

 private:
  struct Constant {
    double beta, a;
  };
  struct Decay {
    double c, d;
  };
  struct Custom {
    std::vector<JainParams> pairs;
  };
  std::variant<Constant, Decay, Custom> rule_;
};

/// (n, sup |P_n f - f| on [lo, hi]) for each n, grid sup over 512 points.
std::vector<std::pair<long, double>> uniform_convergence_trace(
    const ParamLadder& ladder, const FunctionSpec& f, double lo, double hi,
    const std::vector<long>& n_values,
    const TruncationPolicy& policy = TruncationPolicy());

/// The scaled residuals n (P_n f - f)(x) along a ladder, their target
/// x f''(x) / 2, the first-moment drift n P_n(t - x, x) per index (the side
/// condition that decides whether the target is reachable), and a Richardson
/// extrapolation of the residuals through the last three entries.
struct VoronovskayaTrace {
  std::vector<long> n_values;
  std::vector<double> beta_n;
  std::vector<double> a_n;
  std::vector<double> scaled_residuals;
  std::vector<double> drifts;
  double target = 0.0;
  double extrapolated_limit = 0.0;
};

VoronovskayaTrace voronovskaya_trace(
    const ParamLadder& ladder, const FunctionSpec& f, double x,
    const std::vector<long>& n_values,
    const TruncationPolicy& policy = TruncationPolicy());

/// Central second difference with step h = eps^{1/4} max(1, |x|); a
/// cross-check oracle for the exact derivatives of the function algebra.
double second_derivative_fd(const FunctionSpec& f, double x);

/// Polynomial extrapolation in 1/n to n = infinity through the last (up to
/// three) points of the trace.
double richardson_extrapolate(const std::vector<long>& n_values,
                              const std::vector<double>& values);

}  // namespace jain
