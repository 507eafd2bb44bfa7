#include "cvk/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cvk/rng.hpp"
#include "cvk/serialize.hpp"

namespace cvk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_param(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid dataset parameter: ") + what);
}

struct Point2 {
  double x, y;
};

Point2 noisy(SplitMix64& rng, Point2 p, double sigma) {
  double z1, z2;
  rng.next_normal_pair(&z1, &z2);
  return {p.x + sigma * z1, p.y + sigma * z2};
}

}  // namespace

void DatasetParams::validate() const {
  if (noise) check_param(std::isfinite(*noise) && *noise >= 0.0, "noise must be >= 0");
  check_param(std::isfinite(factor) && factor > 0.0 && factor <= 1.0,
              "factor must lie in (0, 1]");
  check_param(std::isfinite(cluster_std) && cluster_std > 0.0, "cluster_std must be > 0");
  check_param(std::isfinite(center_box) && center_box >= 0.0, "center_box must be >= 0");
  check_param(std::isfinite(spiral_rate) && spiral_rate > 0.0, "spiral_rate must be > 0");
  check_param(std::isfinite(curve_margin) && curve_margin >= 0.0,
              "curve_margin must be >= 0");
}

double default_noise(const std::string& name) {
  if (name == "circles") return 0.08;
  if (name == "moons") return 0.1;
  if (name == "spiral") return 0.05;
  if (name == "blobs" || name == "sine") return 0.0;
  throw std::invalid_argument("unknown dataset name: " + name);
}

LabeledDataset generate(const std::string& name, int n, std::uint64_t seed,
                        const DatasetParams& params) {
  params.validate();
  if (n < 4) throw std::invalid_argument("dataset size must be at least 4");
  const double sigma = params.noise ? *params.noise : default_noise(name);
  const int n_pos = (n + 1) / 2;
  const int n_neg = n - n_pos;

  LabeledDataset d;
  d.name = name;
  d.seed = seed;
  d.params = params;
  d.points.reserve(n);
  d.labels.reserve(n);
  SplitMix64 rng(seed);
  auto push = [&d](Point2 p, int label) {
    d.points.push_back({p.x, p.y});
    d.labels.push_back(label);
  };

  // Single stream, fixed draw order: the class +1 block first, then class -1,
  // each point consuming its draws in the order written below.
  if (name == "blobs") {
    const double box = params.center_box;
    auto uniform_box = [&rng, box] { return -box + 2.0 * box * rng.next_double(); };
    const Point2 center_pos{uniform_box(), uniform_box()};
    const Point2 center_neg{uniform_box(), uniform_box()};
    for (int i = 0; i < n_pos; ++i) push(noisy(rng, center_pos, params.cluster_std), 1);
    for (int i = 0; i < n_neg; ++i) push(noisy(rng, center_neg, params.cluster_std), -1);
  } else if (name == "circles") {
    auto ring = [&rng, sigma](double radius) {
      const double a = 2.0 * kPi * rng.next_double();
      return Point2{radius * std::cos(a), radius * std::sin(a)};
    };
    for (int i = 0; i < n_pos; ++i) push(noisy(rng, ring(1.0), sigma), 1);
    for (int i = 0; i < n_neg; ++i) push(noisy(rng, ring(params.factor), sigma), -1);
  } else if (name == "moons") {
    for (int i = 0; i < n_pos; ++i) {
      const double t = kPi * rng.next_double();
      push(noisy(rng, {std::cos(t), std::sin(t)}, sigma), 1);
    }
    for (int i = 0; i < n_neg; ++i) {
      const double t = kPi * rng.next_double();
      push(noisy(rng, {1.0 - std::cos(t), 0.5 - std::sin(t)}, sigma), -1);
    }
  } else if (name == "spiral") {
    auto arm = [&rng, &params](double flip) {
      const double phi = kPi / 4.0 + (4.0 * kPi - kPi / 4.0) * rng.next_double();
      const double r = params.spiral_rate * phi;
      return Point2{flip * r * std::cos(phi), flip * r * std::sin(phi)};
    };
    for (int i = 0; i < n_pos; ++i) push(noisy(rng, arm(1.0), sigma), 1);
    for (int i = 0; i < n_neg; ++i) push(noisy(rng, arm(-1.0), sigma), -1);
  } else if (name == "sine") {
    // Per-class rejection: draws landing in the other class's region or
    // inside the band around the curve are discarded.
    auto fill = [&rng, &params, &push, n](int want, int label) {
      long attempts = 0;
      const long cap = 100000L + 1000L * n;
      int got = 0;
      while (got < want) {
        if (++attempts > cap) {
          throw std::runtime_error("sine generator exceeded its rejection budget");
        }
        const double x = 4.0 * kPi * rng.next_double();
        const double y = -2.0 + 4.0 * rng.next_double();
        const double gap = y - std::sin(x);
        if (std::abs(gap) < params.curve_margin) continue;
        if ((gap > 0.0) != (label > 0)) continue;
        push({x, y}, label);
        ++got;
      }
    };
    fill(n_pos, 1);
    fill(n_neg, -1);
  } else {
    throw std::invalid_argument("unknown dataset name: " + name);
  }
  return d;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& d,
                                                double train_fraction,
                                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  }
  const int n = d.size();
  const int n_train = static_cast<int>(std::llround(train_fraction * n));
  if (n_train < 1 || n_train >= n) {
    throw std::invalid_argument("split would leave one side empty");
  }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  SplitMix64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  }
  LabeledDataset train, valid;
  train.name = valid.name = d.name;
  train.seed = valid.seed = d.seed;
  train.params = valid.params = d.params;
  for (int idx = 0; idx < n; ++idx) {
    LabeledDataset& side = idx < n_train ? train : valid;
    side.points.push_back(d.points[perm[idx]]);
    side.labels.push_back(d.labels[perm[idx]]);
  }
  return {std::move(train), std::move(valid)};
}

void save_dataset(const std::string& path, const LabeledDataset& d) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "# cvk name=%s seed=%llu n=%d noise=",
                d.name.c_str(), static_cast<unsigned long long>(d.seed), d.size());
  out << buf;
  if (d.params.noise) {
    std::snprintf(buf, sizeof buf, "%.17g", *d.params.noise);
    out << buf;
  } else {
    out << "default";
  }
  std::snprintf(buf, sizeof buf,
                " factor=%.17g cluster_std=%.17g center_box=%.17g spiral_rate=%.17g "
                "curve_margin=%.17g\n",
                d.params.factor, d.params.cluster_std, d.params.center_box,
                d.params.spiral_rate, d.params.curve_margin);
  out << buf;
  for (int i = 0; i < d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", d.points[i][0], d.points[i][1],
                  d.labels[i]);
    out << buf;
  }
  save_text_atomic(path, out.str());
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# cvk ", 0) != 0) {
    throw std::invalid_argument("dataset file lacks the `# cvk` header: " + path);
  }
  LabeledDataset d;
  std::istringstream hs(header.substr(6));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed dataset header token: " + tok);
    }
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "name") d.name = val;
    else if (key == "seed") d.seed = std::stoull(val);
    else if (key == "n") continue;  // redundant with the row count
    else if (key == "noise") {
      if (val != "default") d.params.noise = std::stod(val);
    } else if (key == "factor") d.params.factor = std::stod(val);
    else if (key == "cluster_std") d.params.cluster_std = std::stod(val);
    else if (key == "center_box") d.params.center_box = std::stod(val);
    else if (key == "spiral_rate") d.params.spiral_rate = std::stod(val);
    else if (key == "curve_margin") d.params.curve_margin = std::stod(val);
    else throw std::invalid_argument("unknown dataset header key: " + key);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y;
    int label;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d", &x, &y, &label) != 3 ||
        (label != 1 && label != -1)) {
      throw std::invalid_argument("malformed dataset row: " + line);
    }
    d.points.push_back({x, y});
    d.labels.push_back(label);
  }
  if (d.points.empty()) throw std::invalid_argument("dataset file has no rows: " + path);
  return d;
}

}  // namespace cvk
