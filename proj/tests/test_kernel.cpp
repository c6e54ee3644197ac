#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "jain/kernel.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using jain::JainParams;
using jain::kEulerE;
using jain::TruncationPolicy;

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

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(JainParams(0.0, kEulerE));
  CHECK_NOTHROW(JainParams(0.99, 1.0001));
  CHECK_THROWS_AS(JainParams(1.0, 2.0), jain::DomainError);
  CHECK_THROWS_AS(JainParams(-0.1, 2.0), jain::DomainError);
  CHECK_THROWS_AS(JainParams(0.5, 1.0), jain::DomainError);
  CHECK_THROWS_AS(JainParams(0.5, 2.8), jain::DomainError);
  CHECK_THROWS_AS(JainParams(0.5, std::nan("")), jain::DomainError);

  TruncationPolicy bad;
  bad.consecutive_small = 0;
  CHECK_THROWS_AS(bad.check(), jain::DomainError);
}

TEST_CASE("weight: closed values") {
  // k = 0 forces a^{-alpha}
  CHECK(jain::weight(JainParams(0.0, kEulerE), 2.0, 0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  // beta = 0, a = e is the Poisson mass e^{-alpha} alpha^k / k!
  CHECK(jain::weight(JainParams(0.0, kEulerE), 1.0, 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // frozen from the extended-precision oracle: 0.8 e^{-1.6}
  CHECK(jain::weight(JainParams(0.3, kEulerE), 1.0, 2) ==
        doctest::Approx(0.16151721439572430672).epsilon(1e-14));
}

TEST_CASE("weight: matches the extended-precision oracle on samples") {
  testutil::Rng rng(9001);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = rng.uniform(0.0, 0.95);
    const double a = rng.uniform(1.05, kEulerE);
    const double alpha = rng.uniform(0.05, 30.0);
    const long k = rng.integer(0, 80);
    const double got = jain::weight(JainParams(beta, a), alpha, k);
    const double want = static_cast<double>(
        oracle::weight_term(beta, a, alpha, k));
    CHECK(testutil::rel_close(want, got, 1e-12));
  }
}

TEST_CASE("weight: nonnegative, finite deep into the tail") {
  for (double beta : grid_betas())
    for (double a : kGridBases)
      for (long k : {0L, 1L, 5L, 100L, 10000L, 1000000L}) {
        const double w = jain::weight(JainParams(beta, a), 1e6, k);
        CHECK(std::isfinite(w));
        CHECK(w >= 0.0);
      }
}

TEST_CASE("weight: rejects bad arguments") {
  CHECK_THROWS_AS(jain::weight(JainParams(0.2, 2.0), 0.0, 1),
                  jain::DomainError);
  CHECK_THROWS_AS(jain::weight(JainParams(0.2, 2.0), -1.0, 1),
                  jain::DomainError);
  CHECK_THROWS_AS(jain::weight(JainParams(0.2, 2.0), 1.0, -1),
                  jain::DomainError);
}

TEST_CASE("weight_sum: partition of unity examples") {
  CHECK(std::fabs(
            jain::weight_sum(JainParams(0.0, kEulerE), 5.0, kPolicy).partial_sum -
            1.0) < 1e-12);
  CHECK(std::fabs(
            jain::weight_sum(JainParams(0.5, kEulerE), 1.0, kPolicy).partial_sum -
            1.0) < 1e-10);
  // frozen oracle check: brute-force long double sum equals 1 to 19 digits
  CHECK(std::fabs(
            jain::weight_sum(JainParams(0.9, 1.1), 0.1, kPolicy).partial_sum -
            1.0) < 1e-8);
}

TEST_CASE("weight_sum: partition of unity across the full grid") {
  for (double beta : grid_betas())
    for (double a : kGridBases)
      for (double alpha : kGridAlphas) {
        const jain::WeightTail tail =
            jain::weight_sum(JainParams(beta, a), alpha, kPolicy);
        CAPTURE(beta);
        CAPTURE(a);
        CAPTURE(alpha);
        CHECK(std::fabs(tail.partial_sum - 1.0) < 1e-8);
        CHECK(tail.partial_sum >= 0.0);
        // tail_estimate covers the unsummed mass; 1e-10 absorbs the
        // double-precision accumulation of several thousand terms
        CHECK(tail.partial_sum <= 1.0 + tail.tail_estimate + 1e-10);
        CHECK(tail.k_used <= kPolicy.k_max);
      }
}

TEST_CASE("weight_sum: truncation failure carries the partial sum") {
  TruncationPolicy tight;
  tight.k_max = 10;
  try {
    jain::weight_sum(JainParams(0.0, kEulerE), 100.0, tight);
    FAIL("expected TruncationError");
  } catch (const jain::TruncationError& e) {
    CHECK(e.partial_sum < 0.5);  // mass near k = 100 is mostly beyond k = 10
    CHECK(e.k_used == 10);
  }
}

TEST_CASE("generating identity: residual examples") {
  CHECK(jain::generating_identity_residual(JainParams(0.3, kEulerE), 1.0, 1.0,
                                           kPolicy) < 1e-10);
  // beta = 0 reduces to the exponential series
  CHECK(jain::generating_identity_residual(JainParams(0.0, kEulerE), 2.0, 0.5,
                                           kPolicy) < 1e-12);
  CHECK(jain::generating_identity_residual(JainParams(0.4, 2.0), 1.5, 0.8,
                                           kPolicy) < 1e-8);
}

TEST_CASE("generating identity: negative z inside the window") {
  // z = -0.5: |beta z| = 0.15, |beta u| = 0.174 < 1/e
  CHECK(jain::generating_identity_residual(JainParams(0.3, kEulerE), 1.0, -0.5,
                                           kPolicy) < 1e-10);
}

TEST_CASE("generating identity: validity window is enforced") {
  CHECK_THROWS_AS(jain::generating_identity_residual(JainParams(0.5, kEulerE),
                                                     1.0, 2.5, kPolicy),
                  jain::DomainError);
  // negative z blows up |beta u| while |beta z| stays below 1
  CHECK_THROWS_AS(jain::generating_identity_residual(JainParams(0.6, kEulerE),
                                                     1.0, -1.5, kPolicy),
                  jain::DomainError);
}

TEST_CASE("generating identity: residual below 1e-8 on a window sample") {
  for (double beta : {0.0, 0.3, 0.6})
    for (double a : {2.0, kEulerE})
      for (double alpha : {0.5, 1.0, 2.0})
        for (double z : {0.25, 0.6, 1.0}) {
          CAPTURE(beta);
          CAPTURE(a);
          CAPTURE(alpha);
          CAPTURE(z);
          CHECK(jain::generating_identity_residual(JainParams(beta, a), alpha,
                                                   z, kPolicy) < 1e-8);
        }
}

TEST_CASE("weight terms concentrate: the sum is reached quickly for small "
          "alpha") {
  const jain::WeightTail tail =
      jain::weight_sum(JainParams(0.2, 2.0), 0.5, kPolicy);
  CHECK(tail.k_used < 100);
}
