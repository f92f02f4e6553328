#pragma once

#include <cstdint>
#include <random>

#include "dpl/measures.hpp"

namespace dpl {

/// Seeded generator with platform-independent bounded draws, so a seed
/// reproduces the same instance stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for item `index` of a run seeded with `seed`.
  static Rng derived(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1).
  double unit();
  bool coin(double p_true = 0.5) { return unit() < p_true; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct PmfSampler {
  std::int64_t max_width = 10;  ///< window width drawn uniformly in [1, max_width]
  std::int64_t resolution = 16; ///< integer weights in [1, resolution]
  Point offset_lo = -5;         ///< window start drawn in [offset_lo, offset_hi]
  Point offset_hi = 5;
  double hole_probability = 0.0;  ///< chance an interior weight is zeroed
};

/// Integer weights on a random window, normalized exactly.
Pmf random_pmf(Rng& rng, const PmfSampler& sampler);

/// Random rational in [1/resolution, 1] with denominator `resolution`.
Rational random_unit_rational(Rng& rng, std::int64_t resolution);

}  // namespace dpl
