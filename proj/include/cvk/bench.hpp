#pragma once
#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvk/datasets.hpp"
#include "cvk/svm.hpp"

namespace cvk {

// How kernel entries are produced: closed form, or simulated measurement
// protocols with a finite shot budget (quantum families only).
struct EstimationConfig {
  bool exact = true;
  std::int64_t shots = 10000;
  std::uint64_t seed = 0;
};

// Candidate hyperparameter values for grid search; an empty list means the
// dimension stays at its KernelSpec default. Search nests c, then l, then p,
// then rescale, and ties keep the earliest combination.
struct GridValues {
  std::vector<double> c;
  std::vector<double> l;
  std::vector<double> p;
  std::vector<double> rescale;
};

// Default search grids for the tuned families: c in {0.5,1,1.5,2},
// l in {0.25,0.5,1,2}, p in {pi,2pi,4pi}, rescale in {0.5,1,2,4}; only the
// dimensions the family reads are populated.
GridValues default_grid(KernelFamily family);

// One experiment: dataset -> split -> (optional grid search) -> train ->
// validation accuracy, with optional report/grid/plot/model outputs.
struct ExperimentConfig {
  std::string dataset_name = "moons";
  int n = 400;
  std::uint64_t dataset_seed = 0;
  bool split_seed_set = false;     // when false, split seed = dataset seed + 1
  std::uint64_t split_seed = 0;
  DatasetParams dataset_params;
  double train_fraction = 0.5;

  KernelSpec spec;
  bool use_grid = false;
  GridValues grid;
  bool standardize = false;

  TrainConfig train;
  EstimationConfig estimation;

  std::string report_path;  // empty = no file
  std::string grid_path;
  std::string plot_path;
  std::string model_path;
  int resolution = 200;
  double pad = 0.1;  // bounding-box padding fraction when bounds are absent
  std::optional<std::array<double, 4>> bounds;  // x1min, x1max, x2min, x2max
};

// Strict JSON parsing (unknown keys rejected at every level). Throws
// std::invalid_argument with the offending key or value.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

// Fraction of points whose predicted label matches the true label.
double accuracy_score(const SVMModel& model, const LabeledDataset& data);

// Kernel matrix with every entry replaced by its simulated measurement
// estimate. Per-entry substreams come from derive_seed(seed, {1, i, j}) (plus
// a trailing feature index for the coherent phase family, whose real
// reduction needs one swap test per mode). The diagonal stays exactly 1.
// Throws std::invalid_argument for non-quantum families.
GramMatrix gram_matrix_estimated(const std::vector<std::vector<double>>& points,
                                 const KernelSpec& spec, std::int64_t shots,
                                 std::uint64_t seed);

// Decision value at a validation query via shot-estimated kernels against the
// support vectors, using substreams derive_seed(seed, {2, i, query_index}).
double decision_value_estimated(const SVMModel& model, std::span<const double> x,
                                int query_index, std::int64_t shots,
                                std::uint64_t seed);

struct GridSearchResult {
  KernelSpec best_spec;
  double best_accuracy = 0.0;
  // Every evaluated combination with its validation accuracy, in search order.
  std::vector<std::pair<KernelSpec, double>> evaluated;
};

// Exhaustive search over the grid; every cell trains on `train` and scores on
// `valid`. Cells whose training throws are recorded as failures; if all cells
// fail the error lists every cause. Ties keep the first combination in
// nesting order (strict improvement required to switch).
GridSearchResult grid_search(const LabeledDataset& train, const LabeledDataset& valid,
                             KernelFamily family, const GridValues& grid,
                             const TrainConfig& cfg);

struct DecisionGrid {
  std::array<double, 4> bounds;  // x1min, x1max, x2min, x2max
  int resolution = 0;
  std::vector<double> x1;      // row-major, x1 varies fastest
  std::vector<double> x2;
  std::vector<double> value;   // decision values
  std::vector<int> label;      // sign(value), 0 -> +1
};

// Evaluates the model on an inclusive resolution x resolution lattice over
// bounds. The optional transform maps plot coordinates to model coordinates
// (used when training standardized features).
DecisionGrid decision_grid(const SVMModel& model, const std::array<double, 4>& bounds,
                           int resolution);

// Bounding box of the data padded by `pad` of each side's range.
std::array<double, 4> padded_bounds(const LabeledDataset& data, double pad);

// Writes rows x1,x2,decision_value,label at 6 significant digits, with a
// header line, row-major in the grid's order.
void write_grid_csv(const std::string& path, const DecisionGrid& grid);

// Self-contained 600x600 SVG: background cells colored by predicted label
// (horizontal runs merged), scatter points colored by true label.
// Byte-deterministic for identical inputs.
void emit_plot_svg(const std::string& path, const DecisionGrid& grid,
                   const LabeledDataset& data);

struct ExperimentResult {
  ExperimentConfig config;
  KernelSpec chosen_spec;
  double accuracy = 0.0;
  int support_count = 0;
  bool converged = false;
  int train_size = 0;
  int valid_size = 0;
  GridSearchResult search;  // populated when the config used a grid
  SVMModel model;
  double wall_seconds = 0.0;  // console diagnostics only, never serialized
};

// Runs the full pipeline and writes whichever outputs the config names.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministic JSON form of the result (excludes wall time).
nlohmann::json experiment_report_json(const ExperimentResult& result);

struct TableCell {
  int table = 1;                 // 1 or 2
  std::string kernel;            // family name
  std::string dataset;
  double reference = 0.0;        // published accuracy for this cell
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;     // sample standard deviation over seeds
  std::vector<double> per_seed;
  std::vector<KernelSpec> chosen;  // per-seed specs (grid-searched cells)
};

struct TablesReport {
  std::vector<std::uint64_t> seeds;
  std::vector<TableCell> cells;  // 6 cells for table 1, then 6 for table 2
};

// Reproduces both accuracy tables: table 1 runs squeezing amplitude and
// Gaussian untuned on blobs/moons/circles (circles generated at noise 0.25 so
// the classes overlap as in the published figure); table 2 grid-searches the
// coherent phase and exp-sine-squared kernels on moons/spiral/sine. Each cell
// uses dataset seeds from `seeds` with split seed = seed + 1, 400 points, a
// 200/200 split, and reports mean and sample standard deviation.
TablesReport reproduce_tables(const std::vector<std::uint64_t>& seeds,
                              const EstimationConfig& estimation);

nlohmann::json tables_report_json(const TablesReport& report);

// Aligned plain-text rendering for standard output.
std::string tables_report_text(const TablesReport& report);

}  // namespace cvk
