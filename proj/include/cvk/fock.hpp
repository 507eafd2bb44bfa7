#pragma once
#include <complex>
#include <span>
#include <vector>

namespace cvk {

// Single-mode squeezing parameters. The amplitude r must be nonnegative and
// finite; the phase is stored canonically in [0, 2*pi).
class SqueezingParam {
 public:
  SqueezingParam(double r, double theta);
  double r() const { return r_; }
  double theta() const { return theta_; }

 private:
  double r_;
  double theta_;
};

// Coherent-state parameters alpha = magnitude * exp(i * phase). The magnitude
// must be nonnegative and finite; the phase is kept as given.
class CoherentParam {
 public:
  CoherentParam(double magnitude, double phase);
  double magnitude() const { return magnitude_; }
  double phase() const { return phase_; }

 private:
  double magnitude_;
  double phase_;
};

// Number-basis expansion of a single-mode pure state truncated at `cutoff`:
// amplitudes()[n] multiplies |n> for n = 0..cutoff. The squared norm may fall
// below 1 (truncation) but must not exceed it beyond rounding.
class FockVector {
 public:
  explicit FockVector(std::vector<std::complex<double>> amplitudes);
  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
  std::span<const std::complex<double>> amplitudes() const { return amps_; }
  double squared_norm() const;

 private:
  std::vector<std::complex<double>> amps_;
};

// Expansion of the squeezed vacuum over number states: only even indices are
// populated. Pair amplitudes follow the stable ratio recurrence
//   a_{n+1} = a_n * (-tanh r) * sqrt((2n+1)/(2n+2)),   a_0 = 1/sqrt(cosh r),
// and the phase enters as the exact factor exp(i*n*theta) on pair index n, so
// amplitudes(r, theta)[2n] == amplitudes(r, 0)[2n] * polar(1, n*theta)
// bit-for-bit.
FockVector squeezed_vacuum_amplitudes(const SqueezingParam& p, int cutoff);

// Expansion of a coherent state: c_0 = exp(-|alpha|^2/2), c_{n+1} = c_n * alpha / sqrt(n+1).
FockVector coherent_amplitudes(const CoherentParam& p, int cutoff);

// <a|b> over the shared truncation. Throws std::invalid_argument when the two
// cutoffs differ.
std::complex<double> fock_inner_product(const FockVector& a, const FockVector& b);

// Upper bound on the squared-norm weight of the squeezed-vacuum expansion
// beyond an even `cutoff`: the first neglected |a_{m+1}|^2 times the geometric
// series with ratio tanh^2 r. Never smaller than the true tail weight, and
// nonincreasing in the cutoff.
double truncation_tail_bound(const SqueezingParam& p, int cutoff);

// Smallest even cutoff whose tail bound falls below 1e-12, capped at 200.
int default_cutoff(const SqueezingParam& p);

}  // namespace cvk
