#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cvk/estimator.hpp"
#include "cvk/fock.hpp"
#include "cvk/kernels.hpp"
#include "cvk/rng.hpp"
#include "doctest.h"
#include "oracle_helpers.hpp"

using cvk::FockVector;
using cvk::Protocol;
using cvk::ShotEstimate;
using cvk::SqueezingParam;

namespace {
constexpr double kPi = std::numbers::pi;

FockVector squeezed(double r, double theta, int cutoff) {
  return cvk::squeezed_vacuum_amplitudes(SqueezingParam(r, theta), cutoff);
}
}  // namespace

TEST_CASE("exact swap probability") {
  const FockVector a = squeezed(0.9, 0.0, 60);
  CHECK(cvk::exact_swap_probability(a, a) == doctest::Approx(1.0).epsilon(1e-10));

  // Orthogonal states: vacuum against |2>.
  const FockVector vac({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  const FockVector two({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  CHECK(cvk::exact_swap_probability(vac, two) == 0.5);

  const FockVector b = squeezed(1.0, 0.0, 80);
  const FockVector c = squeezed(1.0, kPi, 80);
  CHECK(std::abs(cvk::exact_swap_probability(b, c) - oracle::kSwapProbOpposite) < 1e-9);

  const FockVector shorter = squeezed(1.0, 0.0, 40);
  CHECK_THROWS_AS(cvk::exact_swap_probability(b, shorter), std::invalid_argument);
}

TEST_CASE("swap test estimate is deterministic and well-formed") {
  const FockVector a = squeezed(1.0, 0.0, 80);
  const FockVector b = squeezed(1.0, kPi, 80);

  const ShotEstimate e1 = cvk::swap_test_estimate(a, b, 50000, 42);
  const ShotEstimate e2 = cvk::swap_test_estimate(a, b, 50000, 42);
  CHECK(e1.estimate == e2.estimate);
  CHECK(e1.std_error == e2.std_error);
  CHECK(e1.shots == 50000);
  CHECK(e1.seed == 42);
  CHECK(e1.protocol == Protocol::SwapTest);
  CHECK(e1.estimate >= -1.0);
  CHECK(e1.estimate <= 1.0);

  // std_error = 2 sqrt(p_hat (1 - p_hat) / shots) with p_hat = (estimate+1)/2.
  const double p_hat = (e1.estimate + 1.0) / 2.0;
  CHECK(e1.std_error ==
        doctest::Approx(2.0 * std::sqrt(p_hat * (1.0 - p_hat) / 50000.0)).epsilon(1e-12));

  const ShotEstimate other = cvk::swap_test_estimate(a, b, 50000, 43);
  CHECK(other.estimate != e1.estimate);  // different stream
}

TEST_CASE("identical states give a deterministic unit estimate") {
  const FockVector a = squeezed(0.8, 0.4, 60);
  // p = 1 only up to truncation; use the exact-unit-norm vacuum instead.
  const FockVector vac(std::vector<std::complex<double>>{{1.0, 0.0}});
  const ShotEstimate e = cvk::swap_test_estimate(vac, vac, 1000, 7);
  CHECK(e.estimate == 1.0);
  CHECK(e.std_error == 0.0);
  // Near-unit-norm squeezed state: estimate within truncation of 1.
  const ShotEstimate es = cvk::swap_test_estimate(a, a, 100000, 7);
  CHECK(es.estimate == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("swap estimates concentrate around the exact value") {
  const FockVector a = squeezed(1.0, 0.0, 80);
  const FockVector b = squeezed(1.0, kPi, 80);
  const double exact = 2.0 * cvk::exact_swap_probability(a, b) - 1.0;

  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ShotEstimate e = cvk::swap_test_estimate(a, b, 1000000, seed);
    if (std::abs(e.estimate - exact) <= 3.0 * e.std_error) ++inside;
  }
  CHECK(inside >= 99);
}

TEST_CASE("swap estimator is unbiased over many seeds") {
  const FockVector a = squeezed(1.0, 0.0, 80);
  const FockVector b = squeezed(1.0, kPi, 80);
  const double p = cvk::exact_swap_probability(a, b);
  const double exact = 2.0 * p - 1.0;

  double sum = 0.0;
  const int kSeeds = 1000;
  const std::int64_t kShots = 1000;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    sum += cvk::swap_test_estimate(a, b, kShots, seed).estimate;
  }
  const double mean = sum / kSeeds;
  const double se_mean = 2.0 * std::sqrt(p * (1.0 - p) / (kSeeds * kShots));
  CHECK(std::abs(mean - exact) <= 3.0 * se_mean);
}

TEST_CASE("standard error follows the square-root law") {
  const FockVector a = squeezed(1.0, 0.0, 80);
  const FockVector b = squeezed(1.0, kPi, 80);
  const ShotEstimate small = cvk::swap_test_estimate(a, b, 10000, 5);
  const ShotEstimate large = cvk::swap_test_estimate(a, b, 40000, 6);
  CHECK(small.std_error / large.std_error == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("vacuum projection estimate") {
  SUBCASE("identical parameters collapse to certainty") {
    const SqueezingParam z(1.1, 0.7);
    CHECK(cvk::vacuum_projection_probability(z, z) == 1.0);
    const ShotEstimate e = cvk::vacuum_projection_estimate(z, z, 5000, 9, 80);
    CHECK(e.estimate == 1.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.protocol == Protocol::VacuumProjection);
  }

  SUBCASE("matches the squared kernel modulus") {
    const SqueezingParam z(1.0, 0.0), z2(1.0, kPi);
    CHECK(cvk::vacuum_projection_probability(z, z2) ==
          doctest::Approx(oracle::kSech2).epsilon(1e-12));
    const ShotEstimate e = cvk::vacuum_projection_estimate(z, z2, 1000000, 13, 80);
    CHECK(std::abs(e.estimate - oracle::kSech2) <= 3.0 * e.std_error);
    CHECK(e.estimate >= 0.0);
    CHECK(e.estimate <= 1.0);
  }

  SUBCASE("deterministic under the seed") {
    const SqueezingParam z(0.9, 0.2), z2(1.3, 2.0);
    const ShotEstimate e1 = cvk::vacuum_projection_estimate(z, z2, 20000, 3, 100);
    const ShotEstimate e2 = cvk::vacuum_projection_estimate(z, z2, 20000, 3, 100);
    CHECK(e1.estimate == e2.estimate);
  }

  SUBCASE("estimates stay in the unit interval across random pairs") {
    cvk::SplitMix64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
      const SqueezingParam z(1.5 * rng.next_double(), 2 * kPi * rng.next_double());
      const SqueezingParam z2(1.5 * rng.next_double(), 2 * kPi * rng.next_double());
      const ShotEstimate e =
          cvk::vacuum_projection_estimate(z, z2, 10000, 100 + static_cast<std::uint64_t>(trial), 200);
      CHECK(e.estimate >= 0.0);
      CHECK(e.estimate <= 1.0);
    }
  }
}

TEST_CASE("the two protocols agree for real positive kernels") {
  // Same phase makes the overlap real and positive, so the vacuum projection
  // (|K|^2) must match the squared swap estimate (Re K)^2.
  const SqueezingParam z(1.0, 0.3), z2(0.5, 0.3);
  const int cutoff = 120;
  const FockVector a = cvk::squeezed_vacuum_amplitudes(z, cutoff);
  const FockVector b = cvk::squeezed_vacuum_amplitudes(z2, cutoff);

  const ShotEstimate swap = cvk::swap_test_estimate(a, b, 1000000, 17);
  const ShotEstimate vac = cvk::vacuum_projection_estimate(z, z2, 1000000, 18, cutoff);

  const double k_hat = swap.estimate;
  const double combined =
      std::sqrt(std::pow(2.0 * std::abs(k_hat) * swap.std_error, 2) +
                vac.std_error * vac.std_error);
  CHECK(std::abs(vac.estimate - k_hat * k_hat) <= 3.0 * combined + 1e-9);

  // Both center on the closed form.
  const double k_exact = cvk::squeezed_overlap(z, z2).real();
  CHECK(std::abs(swap.estimate - k_exact) <= 3.0 * swap.std_error);
  CHECK(std::abs(vac.estimate - k_exact * k_exact) <= 3.0 * vac.std_error);
}

TEST_CASE("estimator input validation") {
  const FockVector a = squeezed(1.0, 0.0, 40);
  CHECK_THROWS_AS(cvk::swap_test_estimate(a, a, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(
      cvk::vacuum_projection_estimate(SqueezingParam(1, 0), SqueezingParam(0.5, 0), 100, 1, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(cvk::swap_test_estimate_from_probability(1.5, 100, 1),
                  std::invalid_argument);
  CHECK_NOTHROW(cvk::swap_test_estimate_from_probability(0.5, 100, 1));
}
