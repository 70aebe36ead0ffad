#pragma once

#include <array>
#include <cstdint>

#include "blockcs/block_model.hpp"

namespace blockcs {

/// SplitMix64 finalizer. Used for seeding and for deriving stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `stream` derived from a master seed:
///   splitmix64(seed + 0x9E3779B97F4A7C15 * (stream + 1)).
/// Identical for serial and parallel execution, so per-trial draws never
/// depend on scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// xoshiro256** generator with portable uniform and normal variates.
///
/// The normal sampler is Box-Muller on 53-bit uniforms, so a given seed
/// produces the same sequence on every IEEE-754 platform with a correctly
/// rounded libm, unlike std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal.
  double normal() noexcept;

  /// Vector of i.i.d. standard normals.
  Vector normal_vector(int n);

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Uniformly random set of k distinct block indices from [0, num_blocks), sorted.
BlockSet random_support(Rng& rng, int num_blocks, int k);

/// Block signal with Gaussian coefficients on `support` and zeros elsewhere.
BlockSignal random_block_sparse(Rng& rng, const BlockStructure& structure,
                                const BlockSet& support);

/// Vector of length n with Euclidean norm exactly `radius` (up to rounding),
/// uniformly distributed in direction.
Vector random_on_sphere(Rng& rng, int n, double radius);

}  // namespace blockcs
