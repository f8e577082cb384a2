#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace fbtopics {

// Portable random stream. std::mt19937_64 output is fully specified by the
// standard; the distributions below are implemented here rather than taken
// from <random>, whose distribution algorithms differ between standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Standard normal via Box-Muller.
  double normal();

  /// Samples an index proportionally to non-negative weights. Returns
  /// weights.size() - 1 when rounding pushes the draw past the last bucket.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent seed for a named stage from the master seed, so that
/// adding a stage never perturbs another stage's stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);

}  // namespace fbtopics
