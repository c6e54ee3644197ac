#pragma once

#include <string>
#include <variant>
#include <vector>

#include "jain/errors.hpp"

namespace jain {

struct FunctionSpec;

/// c0 + c1 x + c2 x^2 + ...; the coefficient list is finite and nonempty.
struct Polynomial {
  std::vector<double> coeffs;
};

/// e^{rate x}
struct Exponential {
  double rate = 0.0;
};

/// |x - center|; not differentiable at the center.
struct AbsShift {
  double center = 0.0;
};

/// sin(freq x)
struct Sine {
  double freq = 0.0;
};

/// w1 * f1 + w2 * f2 + ...
struct WeightedSum {
  std::vector<double> weights;
  std::vector<FunctionSpec> parts;
};

/// A closed algebra of test functions with exact evaluation and exact
/// first/second derivatives. Textual syntax (used by the CLI):
///   poly:c0,c1,...   exp:r   abs:c   sin:w   sum:w1*spec1+w2*spec2
struct FunctionSpec {
  std::variant<Polynomial, Exponential, AbsShift, Sine, WeightedSum> node;

  static FunctionSpec parse(const std::string& text);
  std::string to_text() const;

  static FunctionSpec monomial(int power);      // t^power
  static FunctionSpec constant(double c);
};

/// Exact value of the order-th derivative (order in 0..2). Derivatives of
/// AbsShift at its center are rejected, not approximated.
double evaluate(const FunctionSpec& f, double x, int order = 0);

/// 2 when f is twice continuously differentiable everywhere (every variant
/// except AbsShift), otherwise 0.
int smoothness_order(const FunctionSpec& f);

/// Largest power with a nonzero coefficient when f is (a sum of)
/// polynomials; -1 when f involves a non-polynomial part.
int polynomial_degree(const FunctionSpec& f);

struct ModulusEstimate {
  double delta = 0.0;
  double value = 0.0;
  long grid_points = 0;
  bool refined = false;
};

/// Modulus of continuity of the order-th derivative of f on [0, lambda]:
/// grid search over x' with x'' = min(x' + delta, lambda), refined around
/// the grid maximizer by golden section. delta must not exceed lambda.
ModulusEstimate modulus_of_continuity(const FunctionSpec& f, double lambda,
                                      double delta, int order = 0,
                                      long grid_n = 4096);

}  // namespace jain
