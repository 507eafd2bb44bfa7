#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "cvk/kernels.hpp"

namespace cvk {

// Solver controls. C boxes the dual variables (large C approximates the hard
// margin); tol is the maximal-violating-pair gap at which training stops;
// seed shuffles the scan order used to break selection ties.
struct TrainConfig {
  double C = 1000.0;
  double tol = 1e-3;
  std::int64_t max_passes = 200000;
  double support_threshold = 1e-8;
  std::uint64_t seed = 0;
  bool record_objective = false;

  void validate() const;
};

// Trained dual classifier: decision value y(x) = sum_{i in S} alpha_i y_i
// K(x_i, x) + bias. train_points is empty when the model was trained from a
// bare Gram matrix; prediction then needs the points attached by the caller.
struct SVMModel {
  std::vector<double> alpha;
  double bias = 0.0;
  std::vector<int> support_indices;
  std::vector<std::vector<double>> train_points;
  std::vector<int> train_labels;
  KernelSpec spec;
  double C = 1000.0;
  double tol = 1e-3;
  double support_threshold = 1e-8;
  double ridge = 0.0;  // diagonal shift applied when the Gram was not PSD
  bool converged = false;
  std::int64_t iterations = 0;
  std::vector<double> objective_trace;  // per accepted step when recorded
};

// Maximizes the dual L(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i
// y_j K_ij subject to sum alpha_i y_i = 0 and 0 <= alpha_i <= C, by pairwise
// coordinate ascent on the maximal violating pair. The Gram must be
// real-valued; labels must contain both classes. Deterministic for fixed
// inputs and config. Throws std::invalid_argument on bad inputs and
// std::runtime_error when training degenerates (empty support set).
SVMModel train(const GramMatrix& gram, const std::vector<int>& labels,
               const TrainConfig& cfg);

// Convenience overload: builds the real-reduced Gram from the points and
// retains them in the model so predict() works directly.
SVMModel train(const std::vector<std::vector<double>>& points,
               const std::vector<int>& labels, const KernelSpec& spec,
               const TrainConfig& cfg);

// Dual objective at the model's alpha. The model's ridge is included on the
// diagonal so the value is the objective the solver actually maximized; with
// ridge = 0 this is the textbook dual expression verbatim.
double dual_objective(const SVMModel& model, const GramMatrix& gram);

// Bias from the KKT margin equalities: the average of y_i - sum_j alpha_j y_j
// K_ji over margin support vectors (alpha strictly inside the box), falling
// back to all support vectors when none are strictly inside. Throws
// std::runtime_error when the support set is empty.
double compute_bias(const SVMModel& model, const GramMatrix& gram);

// Decision value at a query point via the support-vector expansion, using the
// model's kernel spec and retained training points.
double decision_value(const SVMModel& model, std::span<const double> x);

// Predicted label: sign of the decision value, with sign(0) -> +1.
int predict_label(const SVMModel& model, std::span<const double> x);

struct KktReport {
  double max_violation;        // worst margin violation across all points
  double equality_residual;    // |sum alpha_i y_i|
  double max_lower_violation;  // alpha ~ 0:       want y_i f(x_i) >= 1
  double max_free_violation;   // 0 < alpha < C:   want y_i f(x_i) == 1
  double max_upper_violation;  // alpha ~ C:       want y_i f(x_i) <= 1
};

// Margin diagnostics against the (ridged) training Gram, with the model's
// bias included in f.
KktReport kkt_report(const SVMModel& model, const GramMatrix& gram);

}  // namespace cvk
