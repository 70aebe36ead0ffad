#include "blockcs/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blockcs/error.hpp"

namespace blockcs {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
  for (std::size_t k = 0; k < state_.size(); ++k) {
    state_[k] = splitmix64(seed + 0x9E3779B97F4A7C15ULL * k);
  }
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % n;
}

double Rng::normal() noexcept {
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector Rng::normal_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

BlockSet random_support(Rng& rng, int num_blocks, int k) {
  if (k < 0 || k > num_blocks) throw ParameterError("random_support: k outside [0, num_blocks]");
  std::vector<int> pool(static_cast<std::size_t>(num_blocks));
  for (int i = 0; i < num_blocks; ++i) pool[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates.
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_blocks - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  BlockSet support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

BlockSignal random_block_sparse(Rng& rng, const BlockStructure& structure, const BlockSet& support) {
  BlockSignal x(structure);
  for (int i : support) {
    for (int k = 0; k < structure.length(i); ++k) x.block(i)[k] = rng.normal();
  }
  return x;
}

Vector random_on_sphere(Rng& rng, int n, double radius) {
  Vector v;
  do {
    v = rng.normal_vector(n);
  } while (v.norm() == 0.0);
  return v * (radius / v.norm());
}

}  // namespace blockcs
