#pragma once

// Portable seeded randomness.
//
// Everything random in the toolkit is driven by two primitives whose output
// is fixed by their definitions rather than by a standard-library vendor:
//
//   * std::mt19937_64, whose output sequence is specified exactly by the C++
//     standard, wrapped by Rng with hand-written conversions to doubles and
//     bounded integers (std::uniform_*_distribution is implementation-defined
//     and would break cross-platform replay);
//   * the SplitMix64 finalizer (mix64), used to derive independent seeds and
//     for counter-based draws indexed by (seed, t, i, j).

#include <cstdint>
#include <cstddef>
#include <random>

namespace hk {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds any number of integer words into a seed: h = mix64(h ^ word) per word.
template <class... Words>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Words... words) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ static_cast<std::uint64_t>(words))), ...);
  return h;
}

/// Maps 64 random bits to [0, 1) with 53-bit resolution.
constexpr double unit_open(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Maps 64 random bits to the closed interval [0, 1].
constexpr double unit_closed(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) / static_cast<double>((1ULL << 53) - 1);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  double uniform01() { return unit_open(engine_()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Unbiased integer in [0, bound) by rejection; bound must be positive.
  std::size_t index(std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t threshold = (0 - b) % b;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::size_t>(r % b);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hk
