#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lrcs {

// SplitMix64 generator (Steele, Lea, Flood 2014). Chosen over std::mt19937
// so that streams are identical across standard libraries: all sampling
// (uniform, gaussian, integer) is implemented here, not via <random>
// distributions. Reproducibility contract: same seed + same parameters give
// bit-identical output within one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the spare value is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v >= threshold) return v % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  double sign() { return bernoulli(0.5) ? -1.0 : 1.0; }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Decorrelated sub-stream seed. Experiment runners derive per-cell seeds as
// base_seed + cell_hash (plain wrapping addition); internal component streams
// go through this mix so that e.g. the low-rank and sparse draws of one
// instance never share a raw counter.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng::mix(seed ^ (0x6a09e667f3bcc909ULL + 0x9e3779b97f4a7c15ULL * stream));
}

}  // namespace lrcs
