// Acceptance gate: ten numbered criteria, one pass/fail line each. The exit
// code is the number of failed criteria, so a clean run exits 0.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cvk/bench.hpp"
#include "cvk/datasets.hpp"
#include "cvk/estimator.hpp"
#include "cvk/fock.hpp"
#include "cvk/kernels.hpp"
#include "cvk/rng.hpp"
#include "cvk/serialize.hpp"
#include "cvk/svm.hpp"
#include "oracle_helpers.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20260819;

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-34s %s  %s\n", id, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  if (!pass) ++g_failures;
}

void note(const std::string& text) { std::printf("             note: %s\n", text.c_str()); }

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criterion 1: closed forms vs Fock expansion at the fixed cutoff 80 -----

void criterion_1() {
  Timer timer;
  const int cutoff = 80;
  cvk::SplitMix64 rng(kSeed);
  double worst = 0.0;
  std::string worst_family = "none";

  auto track = [&](double err, const char* family) {
    if (err > worst) {
      worst = err;
      worst_family = family;
    }
  };

  double worst_adaptive = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    {  // squeezing phase: magnitude <= 1.5, angular features in [-pi, pi]
      const double c = 1.5 * (1.0 - rng.next_double());
      const double fx = -kPi + 2 * kPi * rng.next_double();
      const double fy = -kPi + 2 * kPi * rng.next_double();
      const cvk::SqueezingParam pa(c, fx), pb(c, fy);
      const std::complex<double> closed = cvk::squeezing_phase_kernel(
          std::vector<double>{fx}, std::vector<double>{fy}, c, 1.0);
      const std::complex<double> fock =
          cvk::fock_inner_product(cvk::squeezed_vacuum_amplitudes(pa, cutoff),
                                  cvk::squeezed_vacuum_amplitudes(pb, cutoff));
      track(std::abs(closed - fock), "squeezing_phase");
      const int ad = std::max(cvk::default_cutoff(pa), cvk::default_cutoff(pb));
      const std::complex<double> fock_ad =
          cvk::fock_inner_product(cvk::squeezed_vacuum_amplitudes(pa, ad),
                                  cvk::squeezed_vacuum_amplitudes(pb, ad));
      worst_adaptive = std::max(worst_adaptive, std::abs(closed - fock_ad));
    }
    {  // squeezing amplitude: magnitude features in [-1.5, 1.5]
      const double fx = -1.5 + 3.0 * rng.next_double();
      const double fy = -1.5 + 3.0 * rng.next_double();
      const cvk::SqueezingParam pa(std::abs(fx), fx < 0 ? kPi : 0.0);
      const cvk::SqueezingParam pb(std::abs(fy), fy < 0 ? kPi : 0.0);
      const double closed = cvk::squeezing_amplitude_kernel(std::vector<double>{fx},
                                                            std::vector<double>{fy});
      const std::complex<double> fock =
          cvk::fock_inner_product(cvk::squeezed_vacuum_amplitudes(pa, cutoff),
                                  cvk::squeezed_vacuum_amplitudes(pb, cutoff));
      track(std::abs(fock - std::complex<double>(closed, 0.0)), "squeezing_amplitude");
      const int ad = std::max(cvk::default_cutoff(pa), cvk::default_cutoff(pb));
      const std::complex<double> fock_ad =
          cvk::fock_inner_product(cvk::squeezed_vacuum_amplitudes(pa, ad),
                                  cvk::squeezed_vacuum_amplitudes(pb, ad));
      worst_adaptive =
          std::max(worst_adaptive, std::abs(fock_ad - std::complex<double>(closed, 0.0)));
    }
    {  // coherent phase: magnitude <= 1.5, angular features in [-pi, pi]
      const double c = 1.5 * (1.0 - rng.next_double());
      const double fx = -kPi + 2 * kPi * rng.next_double();
      const double fy = -kPi + 2 * kPi * rng.next_double();
      const std::complex<double> closed = cvk::coherent_phase_kernel(
          std::vector<double>{fx}, std::vector<double>{fy}, c, 1.0);
      const std::complex<double> fock = cvk::fock_inner_product(
          cvk::coherent_amplitudes(cvk::CoherentParam(c, fx), cutoff),
          cvk::coherent_amplitudes(cvk::CoherentParam(c, fy), cutoff));
      track(std::abs(closed - fock), "coherent_phase");
      worst_adaptive = std::max(worst_adaptive, std::abs(closed - fock));
    }
    {  // gaussian: displacement-amplitude features in [-1.5, 1.5]
      const double fx = -1.5 + 3.0 * rng.next_double();
      const double fy = -1.5 + 3.0 * rng.next_double();
      const cvk::CoherentParam pa(std::abs(fx), fx < 0 ? kPi : 0.0);
      const cvk::CoherentParam pb(std::abs(fy), fy < 0 ? kPi : 0.0);
      const double closed =
          cvk::gaussian_kernel(std::vector<double>{fx}, std::vector<double>{fy});
      const std::complex<double> fock = cvk::fock_inner_product(
          cvk::coherent_amplitudes(pa, cutoff), cvk::coherent_amplitudes(pb, cutoff));
      track(std::abs(fock - std::complex<double>(closed, 0.0)), "gaussian");
      worst_adaptive =
          std::max(worst_adaptive, std::abs(fock - std::complex<double>(closed, 0.0)));
    }
  }

  // Deterministic ceiling of the residual on the sampled domain: equal
  // maximal squeezing magnitudes at equal angles, where the truncated norm
  // deficit is largest.
  const cvk::SqueezingParam top(1.5, 0.0);
  const double ceiling = std::abs(
      cvk::fock_inner_product(cvk::squeezed_vacuum_amplitudes(top, cutoff),
                              cvk::squeezed_vacuum_amplitudes(top, cutoff)) -
      std::complex<double>(1.0, 0.0));

  const double secs = timer.seconds();
  const bool pass = worst <= 1e-8 && secs < 10.0;
  report(1, "kernel-fock-agreement-at-cutoff-80", pass,
         fmt("max |closed - series| = %.5e (family %s, tolerance 1e-08), %.1fs",
             worst, worst_family.c_str(), secs));
  if (!pass) {
    note(fmt("the truncated squeezed-state series at the fixed cutoff 80 carries a "
             "norm deficit of %.5e at magnitude 1.5, so no implementation of the "
             "stated formulas can reach 1e-08 there; the bound is intrinsic to the "
             "cutoff, not a defect of the closed forms",
             ceiling));
    note(fmt("with the library's adaptive per-state cutoffs (tail bound < 1e-12, "
             "cutoff <= 200) the same 800 draws give max |closed - series| = %.5e",
             worst_adaptive));
  }
}

// --- criterion 2: frozen spot values -----------------------------------------

void criterion_2() {
  const std::complex<double> sq_phase = cvk::squeezing_phase_kernel(
      std::vector<double>{0.0}, std::vector<double>{kPi}, 1.0, 1.0);
  const double sq_amp = cvk::squeezing_amplitude_kernel(std::vector<double>{0.0},
                                                        std::vector<double>{1.0});
  const double gauss =
      cvk::gaussian_kernel(std::vector<double>{0.0}, std::vector<double>{1.0});
  cvk::KernelSpec coh;
  coh.family = cvk::KernelFamily::CoherentPhase;
  const double coh_re =
      cvk::evaluate_real(coh, std::vector<double>{0.0}, std::vector<double>{kPi});

  const double e1 = std::abs(sq_phase - std::complex<double>(oracle::kSqrtSech2, 0.0));
  const double e2 = std::abs(sq_amp - oracle::kSqrtSech1);
  const double e3 = std::abs(gauss - oracle::kExpNegHalf);
  const double e4 = std::abs(coh_re - oracle::kExpNeg2);
  const bool pass = e1 <= 1e-5 && e2 <= 1e-5 && e3 <= 1e-6 && e4 <= 1e-6;
  report(2, "kernel-spot-values", pass,
         fmt("phase %.6f (want %.6f), amplitude %.6f (want %.6f), gaussian %.6f, "
             "coherent %.6f",
             sq_phase.real(), oracle::kSqrtSech2, sq_amp, oracle::kSqrtSech1, gauss,
             coh_re));
}

// --- criterion 3: Gram matrices are PSD --------------------------------------

void criterion_3() {
  Timer timer;
  cvk::SplitMix64 rng(kSeed + 3);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 50; ++i) {
    pts.push_back({-3.0 + 6.0 * rng.next_double(), -3.0 + 6.0 * rng.next_double()});
  }
  double min_eig = 0.0;
  bool pass = true;
  for (cvk::KernelFamily family :
       {cvk::KernelFamily::SqueezingPhase, cvk::KernelFamily::SqueezingAmplitude,
        cvk::KernelFamily::CoherentPhase, cvk::KernelFamily::Gaussian}) {
    cvk::KernelSpec spec;
    spec.family = family;
    const cvk::GramMatrix g = cvk::gram_matrix(pts, spec, true);
    const cvk::PsdReport psd = cvk::psd_report(g, 1e-9);
    min_eig = std::min(min_eig, psd.min_eigenvalue);
    pass = pass && psd.min_eigenvalue >= -1e-9;
  }
  const double secs = timer.seconds();
  pass = pass && secs < 5.0;
  report(3, "gram-positive-semidefinite", pass,
         fmt("min eigenvalue over 4 families x 50 points = %.3e (floor -1e-09), %.1fs",
             min_eig, secs));
}

// --- criterion 4: swap-test coverage and scaling ------------------------------

void criterion_4() {
  Timer timer;
  const cvk::SqueezingParam za(1.0, 0.0), zb(1.0, kPi);
  const int cutoff = std::max(cvk::default_cutoff(za), cvk::default_cutoff(zb));
  const cvk::FockVector a = cvk::squeezed_vacuum_amplitudes(za, cutoff);
  const cvk::FockVector b = cvk::squeezed_vacuum_amplitudes(zb, cutoff);
  const double exact = 2.0 * cvk::exact_swap_probability(a, b) - 1.0;

  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const cvk::ShotEstimate e = cvk::swap_test_estimate(a, b, 1000000, seed);
    if (std::abs(e.estimate - exact) <= 3.0 * e.std_error) ++covered;
  }

  const cvk::ShotEstimate coarse = cvk::swap_test_estimate(a, b, 10000, kSeed + 4);
  const cvk::ShotEstimate fine = cvk::swap_test_estimate(a, b, 40000, kSeed + 5);
  const double ratio = coarse.std_error / fine.std_error;

  const double secs = timer.seconds();
  const bool pass =
      covered >= 99 && std::abs(ratio - 2.0) <= 0.1 && secs < 30.0;
  report(4, "swap-test-coverage-and-scaling", pass,
         fmt("%d/100 seeds within 3 sigma (need >= 99), error ratio x4 shots = %.4f "
             "(want 2 +- 0.1), %.1fs",
             covered, ratio, secs));
}

// --- criterion 5: vacuum projection vs |K|^2 ----------------------------------

void criterion_5() {
  cvk::SplitMix64 rng(kSeed + 5);
  int covered = 0;
  double worst_pull = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const cvk::SqueezingParam z(1.5 * rng.next_double(), 2 * kPi * rng.next_double());
    const cvk::SqueezingParam z2(1.5 * rng.next_double(), 2 * kPi * rng.next_double());
    const double truth = cvk::vacuum_projection_probability(z, z2);
    const cvk::ShotEstimate e = cvk::vacuum_projection_estimate(
        z, z2, 1000000, kSeed + 100 + static_cast<std::uint64_t>(pair), 200);
    const double pull =
        e.std_error > 0.0 ? std::abs(e.estimate - truth) / e.std_error : 0.0;
    worst_pull = std::max(worst_pull, pull);
    if (std::abs(e.estimate - truth) <= 3.0 * e.std_error) ++covered;
  }
  const bool pass = covered == 20;
  report(5, "vacuum-projection-agreement", pass,
         fmt("%d/20 random pairs within 3 sigma of |K|^2, worst pull %.2f sigma",
             covered, worst_pull));
}

// --- criterion 6: solver vs exhaustive reference ------------------------------

void criterion_6() {
  Timer timer;
  cvk::SplitMix64 rng(kSeed + 6);
  double worst_gap = 0.0, worst_kkt = 0.0, worst_eq = 0.0;
  int solved = 0;
  bool pass = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    std::vector<std::vector<double>> pts;
    std::vector<int> labels;
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
      pts.push_back({4 * rng.next_double() - 2, 4 * rng.next_double() - 2});
      const int y = rng.next_double() < 0.5 ? -1 : 1;
      labels.push_back(y);
      (y > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos) labels[0] = 1;
    if (!has_neg) labels[1] = -1;

    cvk::KernelSpec spec;
    spec.family = (trial % 2 == 0) ? cvk::KernelFamily::Gaussian
                                   : cvk::KernelFamily::SqueezingAmplitude;
    cvk::TrainConfig cfg;
    cfg.C = (trial % 4 < 2) ? 1.0 : 1000.0;
    cfg.tol = 1e-10;
    cfg.max_passes = 2000000;

    const cvk::GramMatrix g = cvk::gram_matrix(pts, spec, true);
    const cvk::SVMModel model = cvk::train(g, labels, cfg);
    if (!model.converged || model.ridge != 0.0) {
      pass = false;
      continue;
    }

    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) k[i][j] = g.value(i, j).real();
    }
    const oracle::QpSolution ref = oracle::qp_reference(k, labels, cfg.C);
    if (!ref.found) {
      pass = false;
      continue;
    }
    const double gap = std::abs(cvk::dual_objective(model, g) - ref.objective);
    const cvk::KktReport kkt = cvk::kkt_report(model, g);
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kkt.max_violation);
    worst_eq = std::max(worst_eq, kkt.equality_residual);
    pass = pass && gap <= 1e-6 && kkt.max_violation <= cfg.tol && kkt.equality_residual <= 1e-12;
    ++solved;
  }
  const double secs = timer.seconds();
  pass = pass && solved == 50 && secs < 60.0;
  report(6, "svm-matches-exhaustive-reference", pass,
         fmt("50 instances: max |objective gap| = %.2e (tol 1e-06), max KKT violation "
             "= %.2e, max equality residual = %.2e, %.1fs",
             worst_gap, worst_kkt, worst_eq, secs));
}

// --- criteria 7 and 8: accuracy tables ----------------------------------------

struct CellBand {
  const char* kernel;
  const char* dataset;
  double reference;
};

const cvk::TableCell* find_cell(const cvk::TablesReport& rep, int table,
                                const CellBand& want) {
  for (const cvk::TableCell& cell : rep.cells) {
    if (cell.table == table && cell.kernel == want.kernel &&
        cell.dataset == want.dataset) {
      return &cell;
    }
  }
  return nullptr;
}

void criteria_7_and_8() {
  Timer timer;
  const cvk::TablesReport rep =
      cvk::reproduce_tables({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, cvk::EstimationConfig{});
  const double secs = timer.seconds();

  const CellBand table1[] = {
      {"squeezing_amplitude", "blobs", 0.915},
      {"squeezing_amplitude", "moons", 0.950},
      {"squeezing_amplitude", "circles", 0.795},
      {"gaussian", "blobs", 0.900},
      {"gaussian", "moons", 1.000},
      {"gaussian", "circles", 0.790},
  };
  bool pass7 = secs < 300.0;
  std::string detail7;
  for (const CellBand& want : table1) {
    const cvk::TableCell* cell = find_cell(rep, 1, want);
    if (cell == nullptr || cell->reference != want.reference) {
      pass7 = false;
      detail7 += fmt("[%s/%s missing] ", want.kernel, want.dataset);
      continue;
    }
    bool ok = std::abs(cell->mean_accuracy - want.reference) <= 0.08;
    const std::string ds = want.dataset;
    if (ds == "blobs" || ds == "moons") ok = ok && cell->mean_accuracy > 0.85;
    if (ds == "circles") {
      ok = ok && cell->mean_accuracy >= 0.6 && cell->mean_accuracy <= 0.9;
    }
    pass7 = pass7 && ok;
    detail7 += fmt("%s/%s %.3f->%.3f%s ", want.kernel[0] == 's' ? "sq" : "ga",
                   want.dataset, want.reference, cell->mean_accuracy, ok ? "" : "(!)");
  }
  report(7, "table-1-accuracy-bands", pass7, detail7 + fmt("%.1fs shared", secs));

  const CellBand table2[] = {
      {"coherent_phase", "moons", 1.000},
      {"coherent_phase", "spiral", 0.995},
      {"coherent_phase", "sine", 0.960},
      {"exp_sine_squared", "moons", 1.000},
      {"exp_sine_squared", "spiral", 1.000},
      {"exp_sine_squared", "sine", 0.950},
  };
  bool pass8 = secs < 600.0;
  std::string detail8;
  for (const CellBand& want : table2) {
    const cvk::TableCell* cell = find_cell(rep, 2, want);
    if (cell == nullptr || cell->reference != want.reference) {
      pass8 = false;
      detail8 += fmt("[%s/%s missing] ", want.kernel, want.dataset);
      continue;
    }
    const bool ok = cell->mean_accuracy >= want.reference - 0.08;
    pass8 = pass8 && ok;
    detail8 += fmt("%s/%s %.3f->%.3f%s ", want.kernel[0] == 'c' ? "co" : "es",
                   want.dataset, want.reference, cell->mean_accuracy, ok ? "" : "(!)");
  }
  report(8, "table-2-accuracy-bands", pass8, detail8 + fmt("%.1fs shared", secs));
}

// --- criterion 9: kernel shape orderings ---------------------------------------

void criterion_9() {
  const double sq_re =
      cvk::squeezing_phase_kernel(std::vector<double>{0.0}, std::vector<double>{kPi / 2},
                                  1.5, 1.0)
          .real();
  const double ess = cvk::exp_sine_squared_kernel(
      std::vector<double>{0.0}, std::vector<double>{kPi / 2}, 1.0, 2 * kPi);
  bool pass = sq_re < ess;
  std::string detail =
      fmt("phase(c=1.5) %.4f < periodic %.4f at pi/2; ", sq_re, ess);
  for (double d : {1.5, 2.0, 3.0}) {
    const double amp = cvk::squeezing_amplitude_kernel(std::vector<double>{0.0},
                                                       std::vector<double>{d});
    const double gauss =
        cvk::gaussian_kernel(std::vector<double>{0.0}, std::vector<double>{d});
    pass = pass && amp > gauss;
    detail += fmt("amp/gauss@%g %.4f>%.4f ", d, amp, gauss);
  }
  report(9, "kernel-shape-orderings", pass, detail);
}

// --- criterion 10: artifact determinism ----------------------------------------

bool run_twice_and_compare(cvk::ExperimentConfig cfg, const std::string& tag,
                           std::string& detail) {
  const std::string base = "/tmp/cvk_acceptance_" + tag;
  cfg.report_path = base + "_report.json";
  cfg.model_path = base + "_model.json";
  cfg.grid_path = base + "_grid.csv";
  cfg.plot_path = base + "_plot.svg";
  cvk::run_experiment(cfg);
  const std::string report = slurp(cfg.report_path);
  const std::string model = slurp(cfg.model_path);
  const std::string grid = slurp(cfg.grid_path);
  const std::string plot = slurp(cfg.plot_path);
  cvk::run_experiment(cfg);
  const bool same = report == slurp(cfg.report_path) && model == slurp(cfg.model_path) &&
                    grid == slurp(cfg.grid_path) && plot == slurp(cfg.plot_path);
  detail += fmt("%s %s  ", tag.c_str(), same ? "byte-identical" : "DIFFERS");
  return same && !report.empty() && !model.empty() && !grid.empty() && !plot.empty();
}

void criterion_10() {
  std::string detail;
  bool pass = true;

  cvk::ExperimentConfig plain;
  plain.dataset_name = "moons";
  plain.n = 120;
  plain.dataset_seed = 3;
  plain.spec.family = cvk::KernelFamily::Gaussian;
  plain.resolution = 60;
  pass = run_twice_and_compare(plain, "plain", detail) && pass;

  cvk::ExperimentConfig searched;
  searched.dataset_name = "sine";
  searched.n = 100;
  searched.dataset_seed = 6;
  searched.spec.family = cvk::KernelFamily::ExpSineSquared;
  searched.use_grid = true;
  searched.grid = cvk::default_grid(searched.spec.family);
  searched.resolution = 40;
  pass = run_twice_and_compare(searched, "grid-searched", detail) && pass;

  cvk::ExperimentConfig sampled;
  sampled.dataset_name = "moons";
  sampled.n = 40;
  sampled.dataset_seed = 5;
  sampled.spec.family = cvk::KernelFamily::SqueezingAmplitude;
  sampled.estimation.exact = false;
  sampled.estimation.shots = 5000;
  sampled.estimation.seed = 11;
  sampled.resolution = 40;
  pass = run_twice_and_compare(sampled, "shot-sampled", detail) && pass;

  report(10, "artifact-determinism", pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criteria_7_and_8();
  criterion_9();
  criterion_10();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
