#include "cvk/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace cvk {

namespace {

void check_dims(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("feature vectors must share a nonzero dimension");
  }
}

void check_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "squeezing_phase") return KernelFamily::SqueezingPhase;
  if (name == "squeezing_amplitude") return KernelFamily::SqueezingAmplitude;
  if (name == "coherent_phase") return KernelFamily::CoherentPhase;
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "exp_sine_squared") return KernelFamily::ExpSineSquared;
  if (name == "rbf") return KernelFamily::Rbf;
  throw std::invalid_argument("unknown kernel family: " + name);
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SqueezingPhase: return "squeezing_phase";
    case KernelFamily::SqueezingAmplitude: return "squeezing_amplitude";
    case KernelFamily::CoherentPhase: return "coherent_phase";
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::ExpSineSquared: return "exp_sine_squared";
    case KernelFamily::Rbf: return "rbf";
  }
  throw std::invalid_argument("unknown kernel family enum value");
}

bool family_is_complex(KernelFamily family) {
  return family == KernelFamily::SqueezingPhase || family == KernelFamily::CoherentPhase;
}

bool family_is_quantum(KernelFamily family) {
  switch (family) {
    case KernelFamily::SqueezingPhase:
    case KernelFamily::SqueezingAmplitude:
    case KernelFamily::CoherentPhase:
    case KernelFamily::Gaussian:
      return true;
    default:
      return false;
  }
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::SqueezingPhase:
    case KernelFamily::CoherentPhase:
      check_positive(c, "state amplitude c");
      check_positive(rescale, "rescale");
      break;
    case KernelFamily::ExpSineSquared:
      check_positive(l, "length scale l");
      check_positive(p, "period p");
      break;
    case KernelFamily::Rbf:
      check_positive(l, "length scale l");
      break;
    case KernelFamily::SqueezingAmplitude:
    case KernelFamily::Gaussian:
      break;
  }
}

std::complex<double> squeezed_overlap(const SqueezingParam& a, const SqueezingParam& b) {
  const double ta = std::tanh(a.r());
  const double tb = std::tanh(b.r());
  const double sa = 1.0 / std::cosh(a.r());
  const double sb = 1.0 / std::cosh(b.r());
  const std::complex<double> den = 1.0 - std::polar(ta * tb, b.theta() - a.theta());
  return std::sqrt(std::complex<double>(sa * sb, 0.0) / den);
}

std::complex<double> squeezing_phase_kernel(std::span<const double> x,
                                            std::span<const double> y, double c,
                                            double rescale) {
  check_dims(x, y);
  check_positive(c, "state amplitude c");
  check_positive(rescale, "rescale");
  const double t = std::tanh(c);
  const double s = 1.0 / std::cosh(c);
  std::complex<double> prod = 1.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = rescale * (y[k] - x[k]);
    const std::complex<double> den = 1.0 - std::polar(t * t, d);
    prod *= std::sqrt(std::complex<double>(s * s, 0.0) / den);
  }
  return prod;
}

double squeezing_amplitude_kernel(std::span<const double> x, std::span<const double> y) {
  check_dims(x, y);
  double prod = 1.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double sx = 1.0 / std::cosh(x[k]);
    const double sy = 1.0 / std::cosh(y[k]);
    prod *= std::sqrt(sx * sy / (1.0 - std::tanh(x[k]) * std::tanh(y[k])));
  }
  return prod;
}

std::complex<double> coherent_phase_kernel(std::span<const double> x,
                                           std::span<const double> y, double c,
                                           double rescale) {
  check_dims(x, y);
  check_positive(c, "state amplitude c");
  check_positive(rescale, "rescale");
  const double c2 = c * c;
  std::complex<double> prod = 1.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = rescale * (y[k] - x[k]);
    prod *= std::polar(std::exp(c2 * (std::cos(d) - 1.0)), c2 * std::sin(d));
  }
  return prod;
}

double coherent_phase_kernel_re(std::span<const double> x, std::span<const double> y,
                                double c, double rescale) {
  check_dims(x, y);
  check_positive(c, "state amplitude c");
  check_positive(rescale, "rescale");
  const double c2 = c * c;
  double prod = 1.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = rescale * (y[k] - x[k]);
    prod *= std::exp(c2 * (std::cos(d) - 1.0)) * std::cos(c2 * std::sin(d));
  }
  return prod;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y) {
  check_dims(x, y);
  double d2 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    d2 += d * d;
  }
  return std::exp(-0.5 * d2);
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double l) {
  check_dims(x, y);
  check_positive(l, "length scale l");
  double d2 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    d2 += d * d;
  }
  return std::exp(-0.5 * d2 / (l * l));
}

double exp_sine_squared_kernel(std::span<const double> x, std::span<const double> y,
                               double l, double p) {
  check_dims(x, y);
  check_positive(l, "length scale l");
  check_positive(p, "period p");
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double sn = std::sin(std::abs(x[k] - y[k]) * std::numbers::pi / p);
    s += sn * sn;
  }
  return std::exp(-2.0 * s / (l * l));
}

std::complex<double> evaluate(const KernelSpec& spec, std::span<const double> x,
                              std::span<const double> y) {
  spec.validate();
  switch (spec.family) {
    case KernelFamily::SqueezingPhase:
      return squeezing_phase_kernel(x, y, spec.c, spec.rescale);
    case KernelFamily::SqueezingAmplitude:
      return squeezing_amplitude_kernel(x, y);
    case KernelFamily::CoherentPhase:
      return coherent_phase_kernel(x, y, spec.c, spec.rescale);
    case KernelFamily::Gaussian:
      return gaussian_kernel(x, y);
    case KernelFamily::ExpSineSquared:
      return exp_sine_squared_kernel(x, y, spec.l, spec.p);
    case KernelFamily::Rbf:
      return rbf_kernel(x, y, spec.l);
  }
  throw std::invalid_argument("unknown kernel family enum value");
}

double evaluate_real(const KernelSpec& spec, std::span<const double> x,
                     std::span<const double> y) {
  spec.validate();
  switch (spec.family) {
    case KernelFamily::SqueezingPhase:
      return squeezing_phase_kernel(x, y, spec.c, spec.rescale).real();
    case KernelFamily::CoherentPhase:
      return coherent_phase_kernel_re(x, y, spec.c, spec.rescale);
    default:
      return evaluate(spec, x, y).real();
  }
}

GramMatrix::GramMatrix(Eigen::MatrixXcd values, KernelSpec spec, bool is_real_part)
    : values_(std::move(values)), spec_(spec), is_real_part_(is_real_part) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw std::invalid_argument("gram matrix must be square and nonempty");
  }
  for (int i = 0; i < values_.rows(); ++i) {
    for (int j = i; j < values_.cols(); ++j) {
      const auto vij = values_(i, j);
      if (!std::isfinite(vij.real()) || !std::isfinite(vij.imag())) {
        throw std::invalid_argument("gram entries must be finite");
      }
      if (std::abs(vij - std::conj(values_(j, i))) > 1e-12) {
        throw std::invalid_argument("gram matrix must be Hermitian within 1e-12");
      }
      if (is_real_part_ && (vij.imag() != 0.0 || values_(j, i).imag() != 0.0)) {
        throw std::invalid_argument("real-reduced gram must have zero imaginary parts");
      }
    }
  }
}

GramMatrix gram_matrix(const std::vector<std::vector<double>>& points,
                       const KernelSpec& spec, bool reduce_to_real) {
  spec.validate();
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("gram matrix needs at least one point");
  const size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim || dim == 0) {
      throw std::invalid_argument("points must share a nonzero dimension");
    }
  }
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      if (reduce_to_real) {
        const double v = evaluate_real(spec, points[i], points[j]);
        m(i, j) = v;
        m(j, i) = v;
      } else {
        const std::complex<double> v = evaluate(spec, points[i], points[j]);
        m(i, j) = v;
        m(j, i) = std::conj(v);
      }
    }
  }
  return GramMatrix(std::move(m), spec, reduce_to_real || !family_is_complex(spec.family));
}

PsdReport psd_report(const GramMatrix& gram, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("psd tolerance must be nonnegative");
  double min_eig;
  if (gram.is_real_part()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.real_values(),
                                                      Eigen::EigenvaluesOnly);
    min_eig = es.eigenvalues().minCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram.values(),
                                                       Eigen::EigenvaluesOnly);
    min_eig = es.eigenvalues().minCoeff();
  }
  return PsdReport{min_eig, min_eig >= -tol};
}

}  // namespace cvk
