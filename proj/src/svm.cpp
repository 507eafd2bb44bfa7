#include "cvk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cvk/rng.hpp"

namespace cvk {

namespace {

void check_positive_field(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void check_labels(const std::vector<int>& labels, int n) {
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("label count must match gram size");
  }
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw std::invalid_argument("labels must be -1 or +1");
  }
  if (!pos || !neg) throw std::invalid_argument("training needs both classes");
}

Eigen::MatrixXd ridged_kernel(const GramMatrix& gram, double ridge) {
  Eigen::MatrixXd k = gram.real_values();
  if (ridge > 0.0) k.diagonal().array() += ridge;
  return k;
}

// sum alpha_i y_i in extended precision; the pairwise updates keep this at
// rounding level, and the post-convergence repair removes what remains.
long double equality_sum(const std::vector<double>& alpha, const std::vector<int>& y) {
  long double s = 0.0L;
  for (size_t i = 0; i < alpha.size(); ++i) s += static_cast<long double>(y[i]) * alpha[i];
  return s;
}

}  // namespace

void TrainConfig::validate() const {
  check_positive_field(C, "C");
  check_positive_field(tol, "tol");
  check_positive_field(support_threshold, "support_threshold");
  if (max_passes < 1) throw std::invalid_argument("max_passes must be positive");
}

SVMModel train(const GramMatrix& gram, const std::vector<int>& labels,
               const TrainConfig& cfg) {
  cfg.validate();
  if (!gram.is_real_part()) {
    throw std::invalid_argument("training needs a real-valued gram matrix");
  }
  const int n = gram.size();
  check_labels(labels, n);

  SVMModel model;
  model.train_labels = labels;
  model.spec = gram.spec();
  model.C = cfg.C;
  model.tol = cfg.tol;
  model.support_threshold = cfg.support_threshold;

  // Keep the dual concave: shift the diagonal when the real reduction has a
  // materially negative eigenvalue.
  const PsdReport psd = psd_report(gram, 1e-9);
  model.ridge = psd.is_psd ? 0.0 : -psd.min_eigenvalue + 1e-10;
  const Eigen::MatrixXd k = ridged_kernel(gram, model.ridge);

  std::vector<double>& alpha = model.alpha;
  alpha.assign(n, 0.0);
  // f[i] = sum_j alpha_j y_j K_ij, the decision value without bias.
  std::vector<double> f(n, 0.0);

  // Seeded scan order; ties in pair selection go to the earliest index here.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 rng(cfg.seed);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  }

  const double C = cfg.C;
  while (true) {
    // Maximal violating pair: i maximizes -E_t over the set allowed to grow
    // its alpha contribution, j minimizes it over the set allowed to shrink,
    // where E_t = f_t - y_t. Optimality gap is m - M.
    int i = -1, j = -1;
    double m_val = -std::numeric_limits<double>::infinity();
    double M_val = std::numeric_limits<double>::infinity();
    for (int t : perm) {
      const double v = -(f[t] - labels[t]);
      const bool up = labels[t] > 0 ? alpha[t] < C : alpha[t] > 0.0;
      const bool low = labels[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C;
      if (up && v > m_val) { m_val = v; i = t; }
      if (low && v < M_val) { M_val = v; j = t; }
    }
    if (i < 0 || j < 0 || m_val - M_val <= cfg.tol) {
      model.converged = true;
      break;
    }
    if (model.iterations >= cfg.max_passes) break;

    double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (eta < 1e-12) eta = 1e-12;
    const double gi = labels[i] * (f[i] - labels[i]);
    const double gj = labels[j] * (f[j] - labels[j]);

    // Pair step with exact bound assignment: a variable that hits the box is
    // set to the bound constant itself and its partner is recomputed from the
    // conserved pair quantity. Clamping arithmetic instead would leave
    // ulp-sized residues next to the bounds, and a residue re-enters the
    // working-set selection as an index whose permitted step underflows --
    // the solver would then spin on it without progress.
    const double ai_old = alpha[i];
    const double aj_old = alpha[j];
    double ai = ai_old, aj = aj_old;
    if (labels[i] != labels[j]) {
      const double delta = (-gi - gj) / eta;
      const double diff = ai_old - aj_old;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
        if (ai > C) { ai = C; aj = C - diff; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = -diff; }
        if (aj > C) { aj = C; ai = C + diff; }
      }
    } else {
      const double delta = (gi - gj) / eta;
      const double sum = ai_old + aj_old;
      ai -= delta;
      aj += delta;
      if (sum > C) {
        if (ai > C) { ai = C; aj = sum - C; }
        if (aj > C) { aj = C; ai = sum - C; }
      } else {
        if (aj < 0.0) { aj = 0.0; ai = sum; }
        if (ai < 0.0) { ai = 0.0; aj = sum; }
      }
    }
    alpha[i] = ai;
    alpha[j] = aj;

    const double di = ai - ai_old;
    const double dj = aj - aj_old;
    for (int t = 0; t < n; ++t) {
      f[t] += labels[i] * di * k(i, t) + labels[j] * dj * k(j, t);
    }
    ++model.iterations;
    if (cfg.record_objective) {
      double obj = 0.0;
      for (int t = 0; t < n; ++t) obj += alpha[t] - 0.5 * alpha[t] * labels[t] * f[t];
      model.objective_trace.push_back(obj);
    }
  }

  // Repair the equality constraint: fold the accumulated rounding residual
  // into the most interior variable, where a shift this small cannot move any
  // KKT condition past tolerance.
  for (int pass = 0; pass < 4; ++pass) {
    const long double s = equality_sum(alpha, labels);
    if (std::abs(static_cast<double>(s)) <= 1e-13) break;
    int best = -1;
    double slack = 0.0;
    for (int t = 0; t < n; ++t) {
      const double sl = std::min(alpha[t], C - alpha[t]);
      if (sl > slack) { slack = sl; best = t; }
    }
    if (best < 0) break;
    alpha[best] = std::clamp(
        static_cast<double>(alpha[best] - labels[best] * s), 0.0, C);
  }

  for (int t = 0; t < n; ++t) {
    if (alpha[t] > cfg.support_threshold) model.support_indices.push_back(t);
  }
  model.bias = compute_bias(model, gram);
  return model;
}

SVMModel train(const std::vector<std::vector<double>>& points,
               const std::vector<int>& labels, const KernelSpec& spec,
               const TrainConfig& cfg) {
  SVMModel model = train(gram_matrix(points, spec, true), labels, cfg);
  model.train_points = points;
  return model;
}

double dual_objective(const SVMModel& model, const GramMatrix& gram) {
  const int n = gram.size();
  if (static_cast<int>(model.alpha.size()) != n ||
      static_cast<int>(model.train_labels.size()) != n) {
    throw std::invalid_argument("model and gram sizes disagree");
  }
  const Eigen::MatrixXd k = ridged_kernel(gram, model.ridge);
  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    double fi = 0.0;
    for (int j = 0; j < n; ++j) fi += model.alpha[j] * model.train_labels[j] * k(i, j);
    obj += model.alpha[i] - 0.5 * model.alpha[i] * model.train_labels[i] * fi;
  }
  return obj;
}

double compute_bias(const SVMModel& model, const GramMatrix& gram) {
  const int n = gram.size();
  if (static_cast<int>(model.alpha.size()) != n ||
      static_cast<int>(model.train_labels.size()) != n) {
    throw std::invalid_argument("model and gram sizes disagree");
  }
  const Eigen::MatrixXd k = ridged_kernel(gram, model.ridge);
  const double thr = model.support_threshold;
  bool any_support = false;
  int margin_count = 0;
  double margin_sum = 0.0;
  // Admissible bias interval from the at-bound conditions: every index with
  // alpha at 0 needs y(v - b) <= 0 and every index at C needs y(v - b) >= 0,
  // where v = y - f. Margin vectors pin b to v directly.
  double b_lo = -std::numeric_limits<double>::infinity();
  double b_hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double a = model.alpha[i];
    if (a > thr) any_support = true;
    double fi = 0.0;
    for (int j = 0; j < n; ++j) fi += model.alpha[j] * model.train_labels[j] * k(j, i);
    const double v = model.train_labels[i] - fi;
    if (a > thr && a < model.C - thr) {
      margin_sum += v;
      ++margin_count;
    } else if ((a <= thr) == (model.train_labels[i] > 0)) {
      b_lo = std::max(b_lo, v);
    } else {
      b_hi = std::min(b_hi, v);
    }
  }
  if (!any_support) {
    throw std::runtime_error("degenerate training result: empty support set");
  }
  if (margin_count > 0) return margin_sum / static_cast<double>(margin_count);
  // No margin vector: take the midpoint of the interval, or its only finite
  // edge when one side is unconstrained.
  if (!std::isfinite(b_lo)) return b_hi;
  if (!std::isfinite(b_hi)) return b_lo;
  return 0.5 * (b_lo + b_hi);
}

double decision_value(const SVMModel& model, std::span<const double> x) {
  if (model.train_points.size() != model.alpha.size()) {
    throw std::invalid_argument("model carries no training points for prediction");
  }
  double v = model.bias;
  for (int i : model.support_indices) {
    if (model.train_points[i].size() != x.size()) {
      throw std::invalid_argument("query dimension does not match training data");
    }
    v += model.alpha[i] * model.train_labels[i] *
         evaluate_real(model.spec, model.train_points[i], x);
  }
  return v;
}

int predict_label(const SVMModel& model, std::span<const double> x) {
  return decision_value(model, x) < 0.0 ? -1 : 1;
}

KktReport kkt_report(const SVMModel& model, const GramMatrix& gram) {
  const int n = gram.size();
  if (static_cast<int>(model.alpha.size()) != n ||
      static_cast<int>(model.train_labels.size()) != n) {
    throw std::invalid_argument("model and gram sizes disagree");
  }
  const Eigen::MatrixXd k = ridged_kernel(gram, model.ridge);
  const double thr = model.support_threshold;
  KktReport rep{0.0, 0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    double fi = model.bias;
    for (int j = 0; j < n; ++j) fi += model.alpha[j] * model.train_labels[j] * k(j, i);
    const double margin = model.train_labels[i] * fi;
    if (model.alpha[i] <= thr) {
      rep.max_lower_violation = std::max(rep.max_lower_violation, 1.0 - margin);
    } else if (model.alpha[i] >= model.C - thr) {
      rep.max_upper_violation = std::max(rep.max_upper_violation, margin - 1.0);
    } else {
      rep.max_free_violation = std::max(rep.max_free_violation, std::abs(margin - 1.0));
    }
  }
  rep.equality_residual =
      std::abs(static_cast<double>(equality_sum(model.alpha, model.train_labels)));
  rep.max_violation = std::max({rep.max_lower_violation, rep.max_free_violation,
                                rep.max_upper_violation});
  return rep;
}

}  // namespace cvk
