#pragma once
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace cvk {

// SplitMix64: the state walks the golden-ratio sequence and each output is the
// mix13 finalizer of the new state. The algorithm is fully specified here so
// that every stream reproduces bit-for-bit on any platform; all randomized
// behaviour in the library (sampling, dataset generation, permutations) is
// built on top of it.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1): the top 53 bits scaled by 2^-53.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]: never zero, safe as a log() argument.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // One Bernoulli(p) trial, defined as next_double() < p.
  bool next_bernoulli(double p) { return next_double() < p; }

  // Pair of independent standard normals via the Box-Muller transform:
  //   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2),
  // with u1 in (0,1], u2 in [0,1). Consumes exactly two raw draws.
  void next_normal_pair(double* z0, double* z1) {
    double u1 = next_double_open();
    double u2 = next_double();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * std::numbers::pi * u2;
    *z0 = rad * std::cos(ang);
    *z1 = rad * std::sin(ang);
  }

  // Integer in [0, bound) by 128-bit multiply-shift. The modulo bias is below
  // bound/2^64, which is negligible for the array sizes used here, and the
  // mapping is exactly reproducible everywhere.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Derives an independent sub-seed from a base seed and a list of index words
// by chaining SplitMix64 outputs. Used wherever many parallel streams must be
// reproducible (per-entry shot noise, per-feature protocols).
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> words) {
  std::uint64_t s = seed;
  for (std::uint64_t w : words) {
    SplitMix64 g(s ^ w);
    s = g.next_u64();
  }
  return s;
}

// Number of successes among `shots` Bernoulli(p) trials drawn from
// SplitMix64(seed). Equivalent to counting next_bernoulli(p) over the stream:
// u < p  with u = (x >> 11) * 2^-53  holds iff  (x >> 11) < ceil(p * 2^53),
// so the comparison runs on the raw integers.
inline std::int64_t bernoulli_count(std::uint64_t seed, std::int64_t shots, double p) {
  std::uint64_t thr;
  if (p <= 0.0) {
    thr = 0;
  } else if (p >= 1.0) {
    thr = 1ull << 53;
  } else {
    thr = static_cast<std::uint64_t>(std::ceil(p * 0x1.0p53));
  }
  SplitMix64 g(seed);
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < shots; ++i) {
    count += (g.next_u64() >> 11) < thr;
  }
  return count;
}

}  // namespace cvk
