#include "cvk/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvk/kernels.hpp"
#include "cvk/rng.hpp"

namespace cvk {

namespace {

void check_shots(std::int64_t shots) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
}

}  // namespace

double exact_swap_probability(const FockVector& a, const FockVector& b) {
  const double re = fock_inner_product(a, b).real();
  return std::clamp(0.5 * (1.0 + re), 0.0, 1.0);
}

ShotEstimate swap_test_estimate_from_probability(double p, std::int64_t shots,
                                                 std::uint64_t seed) {
  check_shots(shots);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("swap probability must lie in [0, 1]");
  }
  const std::int64_t hits = bernoulli_count(seed, shots, p);
  const double p_hat = static_cast<double>(hits) / static_cast<double>(shots);
  return ShotEstimate{2.0 * p_hat - 1.0, shots,
                      2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(shots)),
                      Protocol::SwapTest, seed};
}

ShotEstimate swap_test_estimate(const FockVector& a, const FockVector& b,
                                std::int64_t shots, std::uint64_t seed) {
  return swap_test_estimate_from_probability(exact_swap_probability(a, b), shots, seed);
}

double vacuum_projection_probability(const SqueezingParam& z, const SqueezingParam& z2) {
  if (z.r() == z2.r() && z.theta() == z2.theta()) return 1.0;
  const double q = std::norm(squeezed_overlap(z2, z));
  return std::clamp(q, 0.0, 1.0);
}

ShotEstimate vacuum_projection_estimate(const SqueezingParam& z, const SqueezingParam& z2,
                                        std::int64_t shots, std::uint64_t seed,
                                        int cutoff) {
  check_shots(shots);
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  const double q = vacuum_projection_probability(z, z2);

  // Cross-check the closed form against the truncated simulation. The two can
  // differ only through the neglected tails: |<z2|z> - <z2|z>_trunc| is at
  // most sqrt(tail_a * tail_b) <= (tail_a + tail_b)/2 by Cauchy-Schwarz, and
  // squaring at most doubles that. A 10x margin plus an absolute floor keeps
  // the guard from ever tripping on rounding alone.
  const int even_cutoff = cutoff - (cutoff % 2);
  const FockVector fa = squeezed_vacuum_amplitudes(z, cutoff);
  const FockVector fb = squeezed_vacuum_amplitudes(z2, cutoff);
  const double q_fock = std::norm(fock_inner_product(fb, fa));
  const double allowed = 10.0 * (truncation_tail_bound(z, even_cutoff) +
                                 truncation_tail_bound(z2, even_cutoff)) +
                         1e-12;
  if (std::abs(q - q_fock) > allowed) {
    throw std::runtime_error("vacuum projection: closed form and Fock simulation disagree beyond truncation tolerance");
  }

  const std::int64_t hits = bernoulli_count(seed, shots, q);
  const double q_hat = static_cast<double>(hits) / static_cast<double>(shots);
  return ShotEstimate{q_hat, shots,
                      std::sqrt(q_hat * (1.0 - q_hat) / static_cast<double>(shots)),
                      Protocol::VacuumProjection, seed};
}

}  // namespace cvk
