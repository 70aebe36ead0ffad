#pragma once

#include <cstdint>
#include <vector>

namespace blockcs {

/// Binomial coefficient C(n, k); saturates at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k) noexcept;

/// Iterates the k-subsets of {0, ..., n-1} in lexicographic order.
///
///   for (Combinations c(n, k); c.valid(); c.next()) use(c.current());
class Combinations {
 public:
  Combinations(int n, int k);

  bool valid() const noexcept { return valid_; }
  const std::vector<int>& current() const noexcept { return idx_; }
  void next() noexcept;

 private:
  int n_;
  int k_;
  std::vector<int> idx_;
  bool valid_;
};

/// Calls f(subset) for every k-subset of {0, ..., n-1} in lexicographic order.
template <typename F>
void for_each_combination(int n, int k, F&& f) {
  for (Combinations c(n, k); c.valid(); c.next()) f(c.current());
}

}  // namespace blockcs
