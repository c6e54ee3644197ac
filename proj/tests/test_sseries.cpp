#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "jain/report.hpp"
#include "jain/sseries.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using jain::JainParams;
using jain::kEulerE;
using jain::TruncationPolicy;
using testutil::rel_close;

namespace {

const TruncationPolicy kPolicy;

std::vector<double> grid_betas() {
  std::vector<double> betas;
  for (int i = 0; i <= 9; ++i) betas.push_back(0.1 * i);
  return betas;
}

const std::vector<double> kGridBases = {1.1, 1.5, 2.0, kEulerE};
const std::vector<double> kGridAlphas = {0.1, 1.0, 10.0, 100.0};

}  // namespace

TEST_CASE("direct sum: known values") {
  // 1/(1 - q) with q = 0.5
  CHECK(rel_close(2.0, jain::s_series_sum(1, 1.0, JainParams(0.5, kEulerE),
                                          kPolicy),
                  1e-10));
  // beta = 0 collapses the definition to alpha^{r-1}
  CHECK(rel_close(4.0, jain::s_series_sum(3, 2.0, JainParams(0.0, kEulerE),
                                          kPolicy),
                  1e-10));
  // 1/0.25 + 0.25/0.125
  CHECK(rel_close(6.0, jain::s_series_sum(2, 1.0, JainParams(0.5, kEulerE),
                                          kPolicy),
                  1e-10));
  // r = 0 is the reciprocal: alpha S(0) = 1
  CHECK(rel_close(0.25, jain::s_series_sum(0, 4.0, JainParams(0.3, 2.0),
                                           kPolicy),
                  1e-12));
}

TEST_CASE("direct sum: beta = 0 collapse across orders") {
  for (int r : {1, 2, 3, 4})
    for (double alpha : {0.1, 1.0, 10.0}) {
      const double want = std::pow(alpha, r - 1);
      const double got =
          jain::s_series_sum(r, alpha, JainParams(0.0, 1.7), kPolicy);
      CAPTURE(r);
      CAPTURE(alpha);
      CHECK(rel_close(want, got, 1e-10));
    }
}

TEST_CASE("recursion: known values") {
  // S(1) = 1/(1 - q), independent of alpha
  CHECK(rel_close(1.25, jain::s_series_recursion(1, 3.0,
                                                 JainParams(0.2, kEulerE)),
                  1e-12));
  CHECK(rel_close(2.0, jain::s_series_recursion(2, 2.0,
                                                JainParams(0.0, kEulerE)),
                  1e-12));
  const JainParams params(0.3, kEulerE);
  CHECK(rel_close(jain::s_series_sum(4, 1.0, params, kPolicy),
                  jain::s_series_recursion(4, 1.0, params), 1e-8));
}

TEST_CASE("closed forms: known values") {
  CHECK(jain::s_series_closed(1, 7.3, JainParams(0.5, kEulerE)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(jain::s_series_closed(2, 1.0, JainParams(0.5, kEulerE)) ==
        doctest::Approx(6.0).epsilon(1e-14));
  CHECK(jain::s_series_closed(3, 2.0, JainParams(0.0, kEulerE)) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("three-path agreement on the grid") {
  std::vector<jain::Discrepancy> discrepancies;
  for (int r : {1, 2, 3, 4})
    for (double beta : grid_betas())
      for (double a : kGridBases)
        for (double alpha : kGridAlphas) {
          const JainParams params(beta, a);
          const double sum = jain::s_series_sum(r, alpha, params, kPolicy);
          const double rec = jain::s_series_recursion(r, alpha, params);
          const double closed = jain::s_series_closed(r, alpha, params);
          CAPTURE(r);
          CAPTURE(beta);
          CAPTURE(a);
          CAPTURE(alpha);
          CHECK(std::fabs(sum - rec) < 1e-8 * std::max(1.0, std::fabs(sum)));
          if (r <= 2) {
            CHECK(std::fabs(sum - closed) <
                  1e-8 * std::max(1.0, std::fabs(sum)));
          } else if (auto d = jain::maybe_discrepancy("s_series_closed", r,
                                                      params, 0, alpha,
                                                      closed, sum)) {
            discrepancies.push_back(*d);
          }
        }
  // the printed r = 3, 4 forms drop powers of log a; they are exact at
  // a = e and must disagree somewhere below it
  CHECK(!discrepancies.empty());
  for (const auto& d : discrepancies) CHECK(d.a < kEulerE);
}

TEST_CASE("closed forms match the sum at a = e for r = 3, 4") {
  for (int r : {3, 4})
    for (double beta : grid_betas())
      for (double alpha : kGridAlphas) {
        const JainParams params(beta, kEulerE);
        const double sum = jain::s_series_sum(r, alpha, params, kPolicy);
        const double closed = jain::s_series_closed(r, alpha, params);
        CAPTURE(r);
        CAPTURE(beta);
        CAPTURE(alpha);
        CHECK(rel_close(sum, closed, 1e-8));
      }
}

TEST_CASE("recursion equals the oracle sum on random samples") {
  testutil::Rng rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const double beta = rng.uniform(0.0, 0.85);
    const double a = rng.uniform(1.1, kEulerE);
    const double alpha = rng.uniform(0.1, 20.0);
    const int r = static_cast<int>(rng.integer(1, 4));
    const JainParams params(beta, a);
    const double rec = jain::s_series_recursion(r, alpha, params);
    const double want =
        static_cast<double>(oracle::s_series(r, alpha, beta, a, 20000));
    CAPTURE(beta);
    CAPTURE(a);
    CAPTURE(alpha);
    CAPTURE(r);
    CHECK(rel_close(want, rec, 1e-8));
  }
}

TEST_CASE("order and depth errors") {
  const JainParams params(0.5, kEulerE);
  CHECK_THROWS_AS(jain::s_series_closed(5, 1.0, params),
                  jain::UnsupportedOrderError);
  CHECK_THROWS_AS(jain::s_series_closed(0, 1.0, params),
                  jain::UnsupportedOrderError);
  CHECK_THROWS_AS(jain::s_series_recursion(0, 1.0, params),
                  jain::UnsupportedOrderError);
  CHECK_THROWS_AS(jain::s_series_sum(-1, 1.0, params, kPolicy),
                  jain::UnsupportedOrderError);
  CHECK_THROWS_AS(jain::s_series_recursion(2, 1.0, params, 2),
                  jain::TruncationError);
  CHECK_THROWS_AS(jain::s_series_sum(1, -2.0, params, kPolicy),
                  jain::DomainError);
}
