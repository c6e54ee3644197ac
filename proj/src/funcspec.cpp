#include "jain/funcspec.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace jain {

namespace {

double poly_eval(const std::vector<double>& coeffs, double x, int order) {
  // differentiate the coefficient list `order` times, then Horner
  double acc = 0.0;
  for (long i = static_cast<long>(coeffs.size()) - 1; i >= order; --i) {
    double c = coeffs[static_cast<size_t>(i)];
    for (int j = 0; j < order; ++j) c *= static_cast<double>(i - j);
    acc = acc * x + c;
  }
  return acc;
}

struct Evaluator {
  double x;
  int order;

  double operator()(const Polynomial& p) const {
    if (p.coeffs.empty()) throw DomainError("empty polynomial");
    return poly_eval(p.coeffs, x, order);
  }
  double operator()(const Exponential& e) const {
    double d = 1.0;
    for (int j = 0; j < order; ++j) d *= e.rate;
    return d * std::exp(e.rate * x);
  }
  double operator()(const AbsShift& a) const {
    if (order == 0) return std::fabs(x - a.center);
    if (x == a.center)
      throw NondifferentiableError("|x - " + std::to_string(a.center) +
                                   "| has no derivative at its center");
    if (order == 1) return x > a.center ? 1.0 : -1.0;
    return 0.0;
  }
  double operator()(const Sine& s) const {
    switch (order) {
      case 0: return std::sin(s.freq * x);
      case 1: return s.freq * std::cos(s.freq * x);
      default: return -s.freq * s.freq * std::sin(s.freq * x);
    }
  }
  double operator()(const WeightedSum& w) const {
    double acc = 0.0;
    for (size_t i = 0; i < w.parts.size(); ++i)
      acc += w.weights[i] * evaluate(w.parts[i], x, order);
    return acc;
  }
};

}  // namespace

double evaluate(const FunctionSpec& f, double x, int order) {
  if (order < 0 || order > 2)
    throw UnsupportedOrderError("derivative order must be in 0..2");
  return std::visit(Evaluator{x, order}, f.node);
}

int smoothness_order(const FunctionSpec& f) {
  if (std::holds_alternative<AbsShift>(f.node)) return 0;
  if (const auto* w = std::get_if<WeightedSum>(&f.node)) {
    for (const auto& part : w->parts)
      if (smoothness_order(part) == 0) return 0;
  }
  return 2;
}

int polynomial_degree(const FunctionSpec& f) {
  if (const auto* p = std::get_if<Polynomial>(&f.node)) {
    int deg = 0;
    for (size_t i = 0; i < p->coeffs.size(); ++i)
      if (p->coeffs[i] != 0.0) deg = static_cast<int>(i);
    return deg;
  }
  if (const auto* w = std::get_if<WeightedSum>(&f.node)) {
    int deg = 0;
    for (size_t i = 0; i < w->parts.size(); ++i) {
      const int d = polynomial_degree(w->parts[i]);
      if (d < 0) return -1;
      if (w->weights[i] != 0.0) deg = std::max(deg, d);
    }
    return deg;
  }
  return -1;
}

FunctionSpec FunctionSpec::monomial(int power) {
  if (power < 0) throw DomainError("monomial power must be >= 0");
  std::vector<double> c(static_cast<size_t>(power) + 1, 0.0);
  c.back() = 1.0;
  return FunctionSpec{Polynomial{std::move(c)}};
}

FunctionSpec FunctionSpec::constant(double c) {
  return FunctionSpec{Polynomial{{c}}};
}

namespace {

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw DomainError("bad number '" + item + "' in " + context);
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty number list in " + context);
  return out;
}

FunctionSpec parse_atom(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw DomainError("function spec '" + text + "' lacks 'kind:' prefix");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "poly") return FunctionSpec{Polynomial{parse_number_list(body, text)}};
  const auto single = [&]() {
    const auto v = parse_number_list(body, text);
    if (v.size() != 1)
      throw DomainError("'" + kind + ":' takes one number, got '" + body + "'");
    return v[0];
  };
  if (kind == "exp") return FunctionSpec{Exponential{single()}};
  if (kind == "abs") return FunctionSpec{AbsShift{single()}};
  if (kind == "sin") return FunctionSpec{Sine{single()}};
  throw DomainError("unknown function kind '" + kind + "'");
}

// splits "w1*spec1+w2*spec2" at '+' separators, ignoring '+' inside
// exponents like 1e+3
std::vector<std::string> split_sum_terms(const std::string& body) {
  std::vector<std::string> terms;
  size_t start = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '+' && i > 0 && body[i - 1] != 'e' && body[i - 1] != 'E') {
      terms.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  terms.push_back(body.substr(start));
  return terms;
}

}  // namespace

FunctionSpec FunctionSpec::parse(const std::string& text) {
  if (text.rfind("sum:", 0) != 0) return parse_atom(text);
  WeightedSum sum;
  for (const auto& term : split_sum_terms(text.substr(4))) {
    const auto star = term.find('*');
    if (star == std::string::npos)
      throw DomainError("sum term '" + term + "' must look like weight*spec");
    char* end = nullptr;
    const std::string wtext = term.substr(0, star);
    const double w = std::strtod(wtext.c_str(), &end);
    if (end == wtext.c_str() || *end != '\0')
      throw DomainError("bad weight '" + wtext + "' in sum term");
    const std::string spec = term.substr(star + 1);
    if (spec.rfind("sum:", 0) == 0)
      throw DomainError("nested sums are not supported");
    sum.weights.push_back(w);
    sum.parts.push_back(parse_atom(spec));
  }
  return FunctionSpec{std::move(sum)};
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Printer {
  std::string operator()(const Polynomial& p) const {
    std::string out = "poly:";
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
      if (i) out += ',';
      out += format_number(p.coeffs[i]);
    }
    return out;
  }
  std::string operator()(const Exponential& e) const {
    return "exp:" + format_number(e.rate);
  }
  std::string operator()(const AbsShift& a) const {
    return "abs:" + format_number(a.center);
  }
  std::string operator()(const Sine& s) const {
    return "sin:" + format_number(s.freq);
  }
  std::string operator()(const WeightedSum& w) const {
    std::string out = "sum:";
    for (size_t i = 0; i < w.parts.size(); ++i) {
      if (i) out += '+';
      out += format_number(w.weights[i]) + "*" + w.parts[i].to_text();
    }
    return out;
  }
};

}  // namespace

std::string FunctionSpec::to_text() const { return std::visit(Printer{}, node); }

namespace {

// golden-section maximization of g on [lo, hi], assuming g unimodal there
template <class G>
double golden_max(G&& g, double lo, double hi, int iters = 90) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::fabs(b));
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

ModulusEstimate modulus_of_continuity(const FunctionSpec& f, double lambda,
                                      double delta, int order, long grid_n) {
  if (!(lambda > 0.0)) throw DomainError("interval length must be > 0");
  if (!(delta > 0.0) || !(delta <= lambda))
    throw DomainError("delta must satisfy 0 < delta <= interval length");
  const auto gap = [&](double x_lo) {
    const double x_hi = std::min(x_lo + delta, lambda);
    return std::fabs(evaluate(f, x_hi, order) - evaluate(f, x_lo, order));
  };
  double best = 0.0;
  long best_i = 0;
  const double step = lambda / static_cast<double>(grid_n);
  for (long i = 0; i <= grid_n; ++i) {
    const double v = gap(static_cast<double>(i) * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, static_cast<double>(best_i - 1) * step);
  const double hi = std::min(lambda, static_cast<double>(best_i + 1) * step);
  const double refined = golden_max(gap, lo, hi);
  ModulusEstimate out;
  out.delta = delta;
  out.grid_points = grid_n + 1;
  out.refined = refined > best + 1e-12;
  out.value = std::max(best, refined);
  return out;
}

}  // namespace jain
