#pragma once

#include <cstdint>

#include "blockcs/block_model.hpp"

namespace blockcs {

/// Dense M x N real matrix whose columns are partitioned by a block structure.
class SensingMatrix {
 public:
  SensingMatrix(Matrix entries, BlockStructure structure);

  const Matrix& entries() const noexcept { return entries_; }
  const BlockStructure& structure() const noexcept { return structure_; }
  int rows() const noexcept { return static_cast<int>(entries_.rows()); }
  int cols() const noexcept { return static_cast<int>(entries_.cols()); }

  /// Column block Phi[i] (M x d_i).
  auto column_block(int i) const {
    return entries_.middleCols(structure_.offset(i), structure_.length(i));
  }

  /// Columns of the given blocks, concatenated in block order.
  Matrix restricted_columns(const BlockSet& blocks) const;

 private:
  Matrix entries_;
  BlockStructure structure_;
};

/// Phi * x. Throws ParameterError when the structures disagree.
Vector apply(const SensingMatrix& phi, const BlockSignal& x);

/// Phi * v for a plain coefficient vector of length N.
Vector apply(const SensingMatrix& phi, const Vector& v);

/// i.i.d. N(0, 1/M) entries drawn from Rng(seed) in row-major order.
SensingMatrix gen_gaussian(int rows, const BlockStructure& structure, std::uint64_t seed);

/// Identity with the given column structure.
SensingMatrix identity_matrix(const BlockStructure& structure);

/// Options for gen_block_incoherent.
struct IncoherenceOptions {
  /// Cap applied to the singular values of every cross-block Gram block.
  double target_coherence = 0.28;
  int max_iterations = 300;
};

/// Matrix with orthonormal column blocks and small cross-block coherence,
/// obtained by alternating projection of a Gaussian start between
/// "block-coherence <= target" Gram matrices and rank-M Gram matrices.
///
/// For blocks with orthonormal columns the block RIC of order 2 equals the
/// largest singular value of any cross Gram block Phi[i]^T Phi[j], so this
/// yields matrices with delta_2 < 1/3 at sizes where Gaussian draws never do.
/// The result is not certified; callers check it with exact_block_ric.
SensingMatrix gen_block_incoherent(int rows, const BlockStructure& structure,
                                   std::uint64_t seed,
                                   const IncoherenceOptions& options = {});

/// The explicit operator showing the threshold t/(4-t) cannot be relaxed,
/// with its two measurement-equivalent block s-sparse witnesses.
struct SharpnessInstance {
  SensingMatrix phi;
  BlockSignal x1;     // unit kernel direction
  BlockSignal x0;     // ones on blocks [0, s)
  BlockSignal x_hat;  // minus ones on blocks [s, 2s)
  double t = 0.0;
  int s = 0;
  int d = 0;
  int l = 0;
};

/// Builds Phi x = (1 - t/4)^{-1/2} (x - <x1, x> x1) on l uniform blocks of
/// length d, where x1 is the normalized indicator of the first 2s blocks.
///
/// Throws ParameterError if l <= 2s ("2s < l" violated), t is outside
/// (0, 4/3), or s, d < 1. The block RIC of Phi at order ts equals t/(4-t)
/// when t*s is an integer in [1, 2s].
SharpnessInstance sharpness_instance(double t, int s, int d, int l);

}  // namespace blockcs
