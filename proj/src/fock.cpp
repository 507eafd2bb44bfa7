#include "cvk/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvk {

namespace {

double canonical_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

}  // namespace

SqueezingParam::SqueezingParam(double r, double theta) : r_(r), theta_(0.0) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("squeezing amplitude must be nonnegative and finite");
  }
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("squeezing phase must be finite");
  }
  theta_ = canonical_angle(theta);
}

CoherentParam::CoherentParam(double magnitude, double phase)
    : magnitude_(magnitude), phase_(phase) {
  if (!std::isfinite(magnitude) || magnitude < 0.0) {
    throw std::invalid_argument("coherent magnitude must be nonnegative and finite");
  }
  if (!std::isfinite(phase)) {
    throw std::invalid_argument("coherent phase must be finite");
  }
}

FockVector::FockVector(std::vector<std::complex<double>> amplitudes)
    : amps_(std::move(amplitudes)) {
  if (amps_.empty()) {
    throw std::invalid_argument("fock vector needs at least the |0> amplitude");
  }
  double n2 = 0.0;
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("fock amplitudes must be finite");
    }
    n2 += std::norm(a);
  }
  if (n2 > 1.0 + 1e-12) {
    throw std::invalid_argument("fock vector squared norm exceeds 1");
  }
}

double FockVector::squared_norm() const {
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  return n2;
}

FockVector squeezed_vacuum_amplitudes(const SqueezingParam& p, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  std::vector<std::complex<double>> amps(cutoff + 1, 0.0);
  const double t = std::tanh(p.r());
  double a = 1.0 / std::sqrt(std::cosh(p.r()));
  for (int n = 0; 2 * n <= cutoff; ++n) {
    amps[2 * n] = a * std::polar(1.0, n * p.theta());
    a *= -t * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0));
  }
  return FockVector(std::move(amps));
}

FockVector coherent_amplitudes(const CoherentParam& p, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  std::vector<std::complex<double>> amps(cutoff + 1, 0.0);
  const std::complex<double> alpha = std::polar(p.magnitude(), p.phase());
  std::complex<double> c = std::exp(-0.5 * p.magnitude() * p.magnitude());
  for (int n = 0; n <= cutoff; ++n) {
    amps[n] = c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  return FockVector(std::move(amps));
}

std::complex<double> fock_inner_product(const FockVector& a, const FockVector& b) {
  if (a.cutoff() != b.cutoff()) {
    throw std::invalid_argument("fock inner product requires matching cutoffs");
  }
  std::complex<double> s = 0.0;
  auto av = a.amplitudes();
  auto bv = b.amplitudes();
  for (size_t n = 0; n < av.size(); ++n) s += std::conj(av[n]) * bv[n];
  return s;
}

double truncation_tail_bound(const SqueezingParam& p, int cutoff) {
  if (cutoff < 0 || cutoff % 2 != 0) {
    throw std::invalid_argument("tail bound expects an even nonnegative cutoff");
  }
  if (p.r() == 0.0) return 0.0;
  const double t = std::tanh(p.r());
  const double q = t * t;
  // w walks |a_n|^2 up to the first neglected pair index m+1 = cutoff/2 + 1.
  double w = 1.0 / std::cosh(p.r());
  for (int n = 0; n <= cutoff / 2; ++n) {
    w *= q * (2.0 * n + 1.0) / (2.0 * n + 2.0);
  }
  return w / (1.0 - q);
}

int default_cutoff(const SqueezingParam& p) {
  for (int c = 0; c <= 200; c += 2) {
    if (truncation_tail_bound(p, c) < 1e-12) return c;
  }
  return 200;
}

}  // namespace cvk
