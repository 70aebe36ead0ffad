#pragma once

#include <cmath>
#include <vector>

#include "blockcs/block_model.hpp"
#include "blockcs/random.hpp"

namespace blockcs::test {

// Per-block Euclidean norms computed with explicit loops over coefficients.
inline std::vector<double> naive_block_norms(const BlockSignal& x) {
  std::vector<double> out;
  const auto& st = x.structure();
  for (int i = 0; i < st.num_blocks(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < st.length(i); ++k) {
      const double v = x.coeffs()[st.offset(i) + k];
      acc += v * v;
    }
    out.push_back(std::sqrt(acc));
  }
  return out;
}

inline BlockSignal random_signal(Rng& rng, const BlockStructure& st) {
  return BlockSignal(st, rng.normal_vector(st.total_dim()));
}

}  // namespace blockcs::test
