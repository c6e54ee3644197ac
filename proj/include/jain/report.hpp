#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jain/params.hpp"

namespace jain {

/// A closed-form value that disagrees with the series ground truth beyond
/// 1e-6 * max(1, |numeric|). These are collected, never asserted away: the
/// closed forms are hypotheses under test.
struct Discrepancy {
  std::string kind;  // "s_series_closed", "raw_moment_closed", ...
  int order = 0;     // r or moment order
  double beta = 0.0;
  double a = 0.0;
  long n = 0;        // 0 when not applicable
  double x = 0.0;    // x or alpha, depending on kind
  double printed_value = 0.0;
  double numeric_value = 0.0;
};

inline std::optional<Discrepancy> maybe_discrepancy(
    const std::string& kind, int order, const JainParams& params, long n,
    double x, double printed, double numeric, double threshold = 1e-6) {
  if (std::fabs(printed - numeric) <=
      threshold * std::max(1.0, std::fabs(numeric)))
    return std::nullopt;
  return Discrepancy{kind,    order, params.beta(), params.a(),
                     n,       x,     printed,       numeric};
}

/// Smallest n at which the consolidated fourth-moment bound stops dominating
/// the measured fourth central moment; crossover_n = 0 when it held for the
/// whole scanned range.
struct CrossoverRecord {
  double beta = 0.0;
  double a = 0.0;
  double x = 0.0;
  long crossover_n = 0;
};

}  // namespace jain
