#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvk {

// Generator parameters; each dataset reads only the fields it uses. `noise`
// falls back to the per-dataset default (see default_noise) when unset.
struct DatasetParams {
  std::optional<double> noise;  // circles / moons / spiral jitter sigma
  double factor = 0.5;          // circles: inner radius over outer radius
  double cluster_std = 1.5;     // blobs: per-cluster standard deviation
  double center_box = 8.0;      // blobs: centers uniform in [-box, box]^2
  double spiral_rate = 0.25;    // spiral: polar radius r = rate * phi
  double curve_margin = 0.05;   // sine: resample band half-width around sin x

  void validate() const;
};

// Noise sigma used when DatasetParams.noise is unset: circles 0.08,
// moons 0.1, spiral 0.05, and 0 for blobs and sine (which have no additive
// noise term).
double default_noise(const std::string& name);

struct LabeledDataset {
  std::string name;
  std::uint64_t seed = 0;
  DatasetParams params;
  std::vector<std::vector<double>> points;  // 2D feature vectors
  std::vector<int> labels;                  // -1 or +1, aligned with points

  int size() const { return static_cast<int>(points.size()); }
};

// Deterministic seeded generation of one of the five 2D datasets:
// blobs, circles, moons, spiral, sine. Classes are balanced with class +1
// receiving ceil(n/2) points; all randomness comes from a single SplitMix64
// stream in a documented draw order, so regeneration is bit-identical.
// Throws std::invalid_argument on unknown names, n < 4, or invalid params.
LabeledDataset generate(const std::string& name, int n, std::uint64_t seed,
                        const DatasetParams& params = {});

// Seeded permutation split into round(train_fraction * n) training points and
// the rest for validation. Both halves keep the parent's name/seed/params.
// Throws std::invalid_argument when a side would be empty.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& d,
                                                double train_fraction,
                                                std::uint64_t seed);

// Delimited text round-trip: a `# cvk ...` provenance header followed by one
// `x1,x2,label` row per point, coordinates printed with 17 significant digits
// so values survive the round-trip bit-exactly.
void save_dataset(const std::string& path, const LabeledDataset& d);
LabeledDataset load_dataset(const std::string& path);

}  // namespace cvk
