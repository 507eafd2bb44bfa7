#pragma once
#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cvk/fock.hpp"

namespace cvk {

enum class KernelFamily {
  SqueezingPhase,      // features as squeezing phases, shared amplitude c
  SqueezingAmplitude,  // features as squeezing amplitudes, no hyperparameter
  CoherentPhase,       // features as coherent phases on a ring of radius c
  Gaussian,            // exp(-|x-y|^2/2): coherent amplitude encoding
  ExpSineSquared,      // periodic classical kernel with length scale l, period p
  Rbf,                 // exp(-|x-y|^2/(2 l^2)) classical baseline
};

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);
// Families whose raw kernel is complex-valued before any real reduction.
bool family_is_complex(KernelFamily family);
// Families backed by a state encoding (shot-based estimation applies).
bool family_is_quantum(KernelFamily family);

// Hyperparameters for one kernel; each family reads only the fields it uses.
//   c       state amplitude for the phase-encoding families
//   l       length scale (exp_sine_squared, rbf)
//   p       period (exp_sine_squared)
//   rescale multiplies feature differences in the phase-encoding families
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double c = 1.0;
  double l = 1.0;
  double p = 2.0 * std::numbers::pi;
  double rescale = 1.0;

  // Throws std::invalid_argument when a parameter the family uses is not
  // positive and finite.
  void validate() const;
};

// Closed-form overlap of two squeezed vacua,
//   sqrt(sech r sech r' / (1 - e^{i(theta'-theta)} tanh r tanh r')),
// with the principal square root (the radicand stays in the right half-plane).
std::complex<double> squeezed_overlap(const SqueezingParam& a, const SqueezingParam& b);

// Per-feature product kernels. All take feature vectors of equal nonzero
// dimension and throw std::invalid_argument otherwise.
std::complex<double> squeezing_phase_kernel(std::span<const double> x,
                                            std::span<const double> y, double c,
                                            double rescale);
// Squeezing-amplitude encoding. Negative coordinates are accepted (the
// formula stays real and bounded); note the encoding reads features as
// squeezing amplitudes, which are naturally nonnegative, so negative values
// sit outside that physical reading.
double squeezing_amplitude_kernel(std::span<const double> x, std::span<const double> y);
std::complex<double> coherent_phase_kernel(std::span<const double> x,
                                           std::span<const double> y, double c,
                                           double rescale);
// Product of the per-feature real parts
//   exp(-c^2 + c^2 cos d_k) * cos(c^2 sin d_k),  d_k = rescale*(y_k - x_k).
// This is the real reduction used when the coherent phase kernel feeds the
// classifier (not the real part of the product).
double coherent_phase_kernel_re(std::span<const double> x, std::span<const double> y,
                                double c, double rescale);
double gaussian_kernel(std::span<const double> x, std::span<const double> y);
double rbf_kernel(std::span<const double> x, std::span<const double> y, double l);
double exp_sine_squared_kernel(std::span<const double> x, std::span<const double> y,
                               double l, double p);

// Family dispatch. evaluate() returns the raw (possibly complex) value;
// evaluate_real() returns the real reduction that feeds the classifier:
// the real part for squeezing phase, the per-feature real-part product for
// coherent phase, and the value itself for the real families.
std::complex<double> evaluate(const KernelSpec& spec, std::span<const double> x,
                              std::span<const double> y);
double evaluate_real(const KernelSpec& spec, std::span<const double> x,
                     std::span<const double> y);

// Kernel matrix over a point set, with provenance. Entries are Hermitian
// within 1e-12 by construction and the diagonal is exactly 1.
class GramMatrix {
 public:
  GramMatrix(Eigen::MatrixXcd values, KernelSpec spec, bool is_real_part);
  int size() const { return static_cast<int>(values_.rows()); }
  std::complex<double> value(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXcd& values() const { return values_; }
  // Elementwise real parts (equals the stored matrix when is_real_part()).
  Eigen::MatrixXd real_values() const { return values_.real(); }
  // Elementwise moduli; export/inspection only (positivity not guaranteed).
  Eigen::MatrixXd modulus_values() const { return values_.cwiseAbs(); }
  const KernelSpec& spec() const { return spec_; }
  bool is_real_part() const { return is_real_part_; }

 private:
  Eigen::MatrixXcd values_;
  KernelSpec spec_;
  bool is_real_part_;
};

// Assembles the kernel matrix for `points`. With reduce_to_real the entries
// come from evaluate_real(); otherwise from evaluate() with the lower triangle
// mirrored as the conjugate. The diagonal is forced to exactly 1.
GramMatrix gram_matrix(const std::vector<std::vector<double>>& points,
                       const KernelSpec& spec, bool reduce_to_real);

struct PsdReport {
  double min_eigenvalue;
  bool is_psd;  // min_eigenvalue >= -tol
};

// Minimum eigenvalue of the (Hermitian) kernel matrix via self-adjoint
// eigen-decomposition; diagnostic for positive semidefiniteness.
PsdReport psd_report(const GramMatrix& gram, double tol);

}  // namespace cvk
