#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvk/bench.hpp"
#include "cvk/estimator.hpp"
#include "cvk/serialize.hpp"

namespace {

std::vector<double> parse_point(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number in coordinate list: \"" + tok + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty coordinate list");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("not a seed in seed list: \"" + tok + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

struct KernelOptions {
  std::string family = "gaussian";
  double c = 1.0;
  double l = 1.0;
  double p = 2.0 * 3.14159265358979323846;
  double rescale = 1.0;

  void attach(CLI::App* cmd, bool require_family) {
    auto* f = cmd->add_option("--family", family,
                              "kernel family: squeezing_phase, squeezing_amplitude, "
                              "coherent_phase, gaussian, exp_sine_squared, rbf");
    if (require_family) f->required();
    cmd->add_option("--c", c, "state amplitude for the phase-encoding families");
    cmd->add_option("--l", l, "length scale (exp_sine_squared, rbf)");
    cmd->add_option("--p", p, "period (exp_sine_squared)");
    cmd->add_option("--rescale", rescale, "feature-difference rescale (phase families)");
  }

  cvk::KernelSpec spec() const {
    cvk::KernelSpec s;
    s.family = cvk::kernel_family_from_string(family);
    s.c = c;
    s.l = l;
    s.p = p;
    s.rescale = rescale;
    s.validate();
    return s;
  }
};

struct DatasetOptions {
  double noise = 0.0;
  bool noise_set = false;
  cvk::DatasetParams params;

  void attach(CLI::App* cmd) {
    cmd->add_option("--noise", noise, "jitter sigma (default depends on the dataset)")
        ->each([this](const std::string&) { noise_set = true; });
    cmd->add_option("--factor", params.factor, "circles: inner/outer radius ratio");
    cmd->add_option("--cluster-std", params.cluster_std, "blobs: cluster std deviation");
    cmd->add_option("--center-box", params.center_box, "blobs: center range half-width");
    cmd->add_option("--spiral-rate", params.spiral_rate, "spiral: radius per radian");
    cmd->add_option("--curve-margin", params.curve_margin, "sine: resample band half-width");
  }

  cvk::DatasetParams finish() {
    if (noise_set) params.noise = noise;
    return params;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"continuous-variable quantum kernel toolkit"};
  app.require_subcommand(1);

  // ---- datagen ----
  auto* datagen = app.add_subcommand("datagen", "generate a synthetic 2D dataset");
  std::string dg_name, dg_out;
  int dg_n = 400;
  std::uint64_t dg_seed = 0;
  DatasetOptions dg_params;
  datagen->add_option("--name", dg_name, "blobs, circles, moons, spiral, or sine")
      ->required();
  datagen->add_option("--n", dg_n, "number of points (default 400)");
  datagen->add_option("--seed", dg_seed, "generator seed")->required();
  datagen->add_option("--out", dg_out, "output CSV path")->required();
  dg_params.attach(datagen);

  // ---- kernel ----
  auto* kernel = app.add_subcommand("kernel", "evaluate one kernel value");
  KernelOptions k_opts;
  std::string k_x, k_y;
  bool k_real = false;
  k_opts.attach(kernel, true);
  kernel->add_option("--x", k_x, "first point, comma-separated")->required();
  kernel->add_option("--y", k_y, "second point, comma-separated")->required();
  kernel->add_flag("--real", k_real, "print the real reduction used by the classifier");

  // ---- gram ----
  auto* gram = app.add_subcommand("gram", "export the kernel matrix of a dataset");
  KernelOptions g_opts;
  std::string g_data, g_out;
  bool g_complex = false, g_psd = false;
  g_opts.attach(gram, true);
  gram->add_option("--data", g_data, "dataset CSV path")->required();
  gram->add_option("--out", g_out, "output matrix CSV path")->required();
  gram->add_flag("--complex", g_complex, "export raw complex entries instead of the real reduction");
  gram->add_flag("--psd", g_psd, "also print the minimum eigenvalue");

  // ---- estimate ----
  auto* estimate = app.add_subcommand("estimate", "simulate a kernel estimation protocol");
  std::string e_protocol;
  double e_r = 1.0, e_theta = 0.0, e_r2 = 1.0, e_theta2 = 0.0;
  std::int64_t e_shots = 10000;
  std::uint64_t e_seed = 0;
  int e_cutoff = 0;
  estimate->add_option("--protocol", e_protocol, "swap or vacuum")->required();
  estimate->add_option("--r", e_r, "squeezing amplitude of the first state");
  estimate->add_option("--theta", e_theta, "squeezing phase of the first state");
  estimate->add_option("--r2", e_r2, "squeezing amplitude of the second state");
  estimate->add_option("--theta2", e_theta2, "squeezing phase of the second state");
  estimate->add_option("--shots", e_shots, "shot budget (default 10000)");
  estimate->add_option("--seed", e_seed, "sampling seed")->required();
  estimate->add_option("--cutoff", e_cutoff,
                       "Fock truncation (default: tail bound below 1e-12)");

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train an SVM on a dataset CSV");
  KernelOptions t_opts;
  std::string t_data, t_out;
  cvk::TrainConfig t_cfg;
  t_opts.attach(train_cmd, true);
  train_cmd->add_option("--data", t_data, "training dataset CSV path")->required();
  train_cmd->add_option("--out", t_out, "output model JSON path")->required();
  train_cmd->add_option("--C", t_cfg.C, "box bound (default 1000)");
  train_cmd->add_option("--tol", t_cfg.tol, "stopping tolerance (default 1e-3)");
  train_cmd->add_option("--max-passes", t_cfg.max_passes, "pair-update budget");
  train_cmd->add_option("--support-threshold", t_cfg.support_threshold,
                        "alpha threshold for support vectors");
  train_cmd->add_option("--seed", t_cfg.seed, "scan-order tie-break seed")->required();

  // ---- predict ----
  auto* predict = app.add_subcommand("predict", "evaluate a trained model");
  std::string p_model, p_x, p_data;
  bool p_accuracy = false;
  predict->add_option("--model", p_model, "model JSON path")->required();
  predict->add_option("--x", p_x, "single query point, comma-separated");
  predict->add_option("--data", p_data, "dataset CSV to score row by row");
  predict->add_flag("--accuracy", p_accuracy, "with --data: print the accuracy");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "run an experiment config or the accuracy tables");
  std::string b_config, b_seeds, b_out;
  bool b_tables = false;
  std::int64_t b_shots = 0;
  std::uint64_t b_est_seed = 0;
  bench->add_option("--config", b_config, "experiment config JSON path");
  bench->add_flag("--tables", b_tables, "reproduce both accuracy tables");
  bench->add_option("--seeds", b_seeds, "comma-separated dataset seeds (with --tables)");
  bench->add_option("--out", b_out, "write the aggregated report JSON here");
  bench->add_option("--shots", b_shots,
                    "estimate quantum kernels with this shot budget (classical cells stay exact)");
  bench->add_option("--estimation-seed", b_est_seed, "base seed for shot estimation");

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "export a decision grid and SVG plot");
  std::string pl_model, pl_data, pl_out, pl_grid_out, pl_bounds;
  int pl_res = 200;
  double pl_pad = 0.1;
  plot->add_option("--model", pl_model, "model JSON path")->required();
  plot->add_option("--data", pl_data, "dataset CSV for the scatter and bounds")->required();
  plot->add_option("--out", pl_out, "output SVG path")->required();
  plot->add_option("--grid-out", pl_grid_out, "also write the grid CSV here");
  plot->add_option("--resolution", pl_res, "grid resolution (default 200)");
  plot->add_option("--bounds", pl_bounds, "x1min,x1max,x2min,x2max (default: padded data box)");
  plot->add_option("--pad", pl_pad, "bounding-box padding fraction (default 0.1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*datagen) {
    const cvk::LabeledDataset d = cvk::generate(dg_name, dg_n, dg_seed, dg_params.finish());
    cvk::save_dataset(dg_out, d);
    std::printf("wrote %d points to %s\n", d.size(), dg_out.c_str());
    return 0;
  }

  if (*kernel) {
    const cvk::KernelSpec spec = k_opts.spec();
    const std::vector<double> x = parse_point(k_x);
    const std::vector<double> y = parse_point(k_y);
    if (k_real || !cvk::family_is_complex(spec.family)) {
      std::printf("%.17g\n", cvk::evaluate_real(spec, x, y));
    } else {
      const std::complex<double> v = cvk::evaluate(spec, x, y);
      std::printf("%.17g%+.17gi\n", v.real(), v.imag());
    }
    return 0;
  }

  if (*gram) {
    const cvk::KernelSpec spec = g_opts.spec();
    const cvk::LabeledDataset d = cvk::load_dataset(g_data);
    const cvk::GramMatrix m = cvk::gram_matrix(d.points, spec, !g_complex);
    std::string out;
    char buf[96];
    for (int i = 0; i < m.size(); ++i) {
      for (int j = 0; j < m.size(); ++j) {
        if (j) out += ",";
        if (g_complex) {
          std::snprintf(buf, sizeof buf, "%.17g%+.17gi", m.value(i, j).real(),
                        m.value(i, j).imag());
        } else {
          std::snprintf(buf, sizeof buf, "%.17g", m.value(i, j).real());
        }
        out += buf;
      }
      out += "\n";
    }
    cvk::save_text_atomic(g_out, out);
    std::printf("wrote %dx%d gram matrix to %s\n", m.size(), m.size(), g_out.c_str());
    if (g_psd) {
      const cvk::PsdReport rep = cvk::psd_report(m, 1e-9);
      std::printf("min_eigenvalue %.17g\nis_psd %d\n", rep.min_eigenvalue,
                  rep.is_psd ? 1 : 0);
    }
    return 0;
  }

  if (*estimate) {
    const cvk::SqueezingParam z(e_r, e_theta);
    const cvk::SqueezingParam z2(e_r2, e_theta2);
    int cutoff = e_cutoff;
    if (cutoff <= 0) cutoff = std::max(cvk::default_cutoff(z), cvk::default_cutoff(z2));
    cvk::ShotEstimate est{};
    if (e_protocol == "swap") {
      est = cvk::swap_test_estimate(cvk::squeezed_vacuum_amplitudes(z, cutoff),
                                    cvk::squeezed_vacuum_amplitudes(z2, cutoff),
                                    e_shots, e_seed);
    } else if (e_protocol == "vacuum") {
      est = cvk::vacuum_projection_estimate(z, z2, e_shots, e_seed, cutoff);
    } else {
      throw std::invalid_argument("protocol must be swap or vacuum");
    }
    std::printf("estimate %.17g\nstd_error %.17g\n", est.estimate, est.std_error);
    return 0;
  }

  if (*train_cmd) {
    const cvk::KernelSpec spec = t_opts.spec();
    const cvk::LabeledDataset d = cvk::load_dataset(t_data);
    const cvk::SVMModel model = cvk::train(d.points, d.labels, spec, t_cfg);
    cvk::save_model(t_out, model);
    std::printf("converged %d\niterations %lld\nsupport_count %zu\nbias %.17g\n",
                model.converged ? 1 : 0, static_cast<long long>(model.iterations),
                model.support_indices.size(), model.bias);
    return 0;
  }

  if (*predict) {
    const cvk::SVMModel model = cvk::load_model(p_model);
    if (p_x.empty() == p_data.empty()) {
      throw std::invalid_argument("predict needs exactly one of --x or --data");
    }
    if (!p_x.empty()) {
      const std::vector<double> x = parse_point(p_x);
      std::printf("%d %.17g\n", cvk::predict_label(model, x),
                  cvk::decision_value(model, x));
    } else {
      const cvk::LabeledDataset d = cvk::load_dataset(p_data);
      int hits = 0;
      for (int i = 0; i < d.size(); ++i) {
        const int label = cvk::predict_label(model, d.points[i]);
        std::printf("%d %.17g\n", label, cvk::decision_value(model, d.points[i]));
        if (label == d.labels[i]) ++hits;
      }
      if (p_accuracy) {
        std::printf("accuracy %.17g\n",
                    static_cast<double>(hits) / static_cast<double>(d.size()));
      }
    }
    return 0;
  }

  if (*bench) {
    if (b_config.empty() == !b_tables) {
      throw std::invalid_argument("bench needs exactly one of --config or --tables");
    }
    if (!b_config.empty()) {
      const cvk::ExperimentConfig cfg = cvk::load_experiment_config(b_config);
      const cvk::ExperimentResult result = cvk::run_experiment(cfg);
      std::printf("dataset %s seed %llu\n", cfg.dataset_name.c_str(),
                  static_cast<unsigned long long>(cfg.dataset_seed));
      std::printf("kernel %s\n", cvk::to_string(result.chosen_spec.family).c_str());
      std::printf("accuracy %.17g\nsupport_count %d\nconverged %d\n", result.accuracy,
                  result.support_count, result.converged ? 1 : 0);
      std::printf("wall_seconds %.3f\n", result.wall_seconds);
    } else {
      if (b_seeds.empty()) throw std::invalid_argument("--tables needs --seeds");
      cvk::EstimationConfig est;
      if (b_shots > 0) {
        est.exact = false;
        est.shots = b_shots;
        est.seed = b_est_seed;
      }
      const auto t0 = std::chrono::steady_clock::now();
      const cvk::TablesReport report = cvk::reproduce_tables(parse_seeds(b_seeds), est);
      std::fputs(cvk::tables_report_text(report).c_str(), stdout);
      if (!b_out.empty()) {
        cvk::save_text_atomic(b_out, cvk::tables_report_json(report).dump(2) + "\n");
        std::printf("wrote report to %s\n", b_out.c_str());
      }
      std::printf("wall_seconds %.3f\n",
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count());
    }
    return 0;
  }

  if (*plot) {
    const cvk::SVMModel model = cvk::load_model(pl_model);
    const cvk::LabeledDataset d = cvk::load_dataset(pl_data);
    std::array<double, 4> bounds{};
    if (pl_bounds.empty()) {
      bounds = cvk::padded_bounds(d, pl_pad);
    } else {
      const std::vector<double> b = parse_point(pl_bounds);
      if (b.size() != 4) throw std::invalid_argument("--bounds needs 4 numbers");
      bounds = {b[0], b[1], b[2], b[3]};
    }
    const cvk::DecisionGrid grid = cvk::decision_grid(model, bounds, pl_res);
    if (!pl_grid_out.empty()) cvk::write_grid_csv(pl_grid_out, grid);
    cvk::emit_plot_svg(pl_out, grid, d);
    std::printf("wrote %dx%d plot to %s\n", pl_res, pl_res, pl_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
