#include "blockcs/combinatorics.hpp"

#include <limits>
#include <numeric>

#include "blockcs/error.hpp"

namespace blockcs {

std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step; divide out the gcd
    // first so the product only overflows when the answer does.
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;
    if (result > kMax / num) return kMax;
    result *= num;
  }
  return result;
}

Combinations::Combinations(int n, int k) : n_(n), k_(k), valid_(k >= 0 && k <= n) {
  if (n < 0) throw ParameterError("Combinations: negative n");
  idx_.resize(static_cast<std::size_t>(std::max(k, 0)));
  std::iota(idx_.begin(), idx_.end(), 0);
}

void Combinations::next() noexcept {
  int i = k_ - 1;
  while (i >= 0 && idx_[static_cast<std::size_t>(i)] == n_ - k_ + i) --i;
  if (i < 0) {
    valid_ = false;
    return;
  }
  ++idx_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k_; ++j) {
    idx_[static_cast<std::size_t>(j)] = idx_[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace blockcs
