#pragma once
#include <cstdint>

#include "cvk/fock.hpp"

namespace cvk {

enum class Protocol {
  SwapTest,          // ancilla swap test: estimates Re K as 2p - 1
  VacuumProjection,  // adjoint squeezing + vacuum check: estimates |K|^2
};

// One finite-shot kernel estimate. For SwapTest the estimate lies in [-1, 1]
// and std_error = 2*sqrt(p_hat(1-p_hat)/shots); for VacuumProjection the
// estimate lies in [0, 1] and std_error = sqrt(q_hat(1-q_hat)/shots).
struct ShotEstimate {
  double estimate;
  std::int64_t shots;
  double std_error;
  Protocol protocol;
  std::uint64_t seed;
};

// Probability of the +1 outcome of a sigma_x measurement on the swap-test
// ancilla: p = (1 + Re<a|b>)/2, clamped to [0, 1] against rounding. Throws
// std::invalid_argument when the cutoffs differ.
double exact_swap_probability(const FockVector& a, const FockVector& b);

// Samples `shots` Bernoulli trials at a caller-supplied success probability
// and applies the swap-test map (estimate = 2*p_hat - 1). Building block for
// swap tests on product states, where p comes from a product of per-mode
// overlaps rather than a single Fock pair.
ShotEstimate swap_test_estimate_from_probability(double p, std::int64_t shots,
                                                 std::uint64_t seed);

// Full swap-test simulation at the probability level: computes p exactly from
// the truncated states, then samples. Same seed => identical estimate.
ShotEstimate swap_test_estimate(const FockVector& a, const FockVector& b,
                                std::int64_t shots, std::uint64_t seed);

// Probability that the mode is found in vacuum after S^dag(z2) S(z):
// q = |<z2|z>|^2 from the closed form. Identical parameters short-circuit to
// exactly 1 (the two squeezings cancel as operators, no rounding involved).
double vacuum_projection_probability(const SqueezingParam& z, const SqueezingParam& z2);

// Finite-shot vacuum-projection estimate of |K|^2. The closed-form q is
// cross-checked against the Fock-space inner product at `cutoff`; disagreement
// beyond what the truncation tails allow throws std::runtime_error. This
// protocol recovers the squared magnitude only, never the phase of K.
ShotEstimate vacuum_projection_estimate(const SqueezingParam& z, const SqueezingParam& z2,
                                        std::int64_t shots, std::uint64_t seed,
                                        int cutoff);

}  // namespace cvk
