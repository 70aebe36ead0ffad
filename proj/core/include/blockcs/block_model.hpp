#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace blockcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordered list of block indices (0-based), always sorted ascending.
using BlockSet = std::vector<int>;

/// Partition of R^N into l consecutive blocks of lengths d_1, ..., d_l.
class BlockStructure {
 public:
  explicit BlockStructure(std::vector<int> block_lengths);

  /// l blocks of identical length d.
  static BlockStructure uniform(int num_blocks, int block_length);

  int num_blocks() const noexcept { return static_cast<int>(lengths_.size()); }
  int total_dim() const noexcept { return total_dim_; }
  int length(int block) const { return lengths_.at(static_cast<std::size_t>(block)); }
  int offset(int block) const { return offsets_.at(static_cast<std::size_t>(block)); }
  const std::vector<int>& lengths() const noexcept { return lengths_; }
  const std::vector<int>& offsets() const noexcept { return offsets_; }

  /// Number of coordinates covered by the given blocks.
  int support_dim(const BlockSet& blocks) const;

  /// Coordinate indices of the given blocks, in block order.
  std::vector<int> coordinates(const BlockSet& blocks) const;

  friend bool operator==(const BlockStructure&, const BlockStructure&) = default;

 private:
  std::vector<int> lengths_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

/// Dense coefficient vector bound to a block structure.
class BlockSignal {
 public:
  /// Zero signal.
  explicit BlockSignal(BlockStructure structure);
  BlockSignal(BlockStructure structure, Vector coeffs);

  const BlockStructure& structure() const noexcept { return structure_; }
  const Vector& coeffs() const noexcept { return coeffs_; }
  Vector& coeffs() noexcept { return coeffs_; }
  int num_blocks() const noexcept { return structure_.num_blocks(); }

  auto block(int i) const {
    return coeffs_.segment(structure_.offset(i), structure_.length(i));
  }
  auto block(int i) {
    return coeffs_.segment(structure_.offset(i), structure_.length(i));
  }

  /// Euclidean norm of block i.
  double block_norm(int i) const { return block(i).norm(); }

  /// Per-block Euclidean norms.
  Vector block_norms() const;

  /// Copy keeping only the listed blocks (x_Pi).
  BlockSignal restricted_to(const BlockSet& blocks) const;

  BlockSignal& operator+=(const BlockSignal& other);
  BlockSignal& operator-=(const BlockSignal& other);
  BlockSignal& operator*=(double c);

  friend BlockSignal operator+(BlockSignal a, const BlockSignal& b) { return a += b; }
  friend BlockSignal operator-(BlockSignal a, const BlockSignal& b) { return a -= b; }
  friend BlockSignal operator*(double c, BlockSignal a) { return a *= c; }

 private:
  BlockStructure structure_;
  Vector coeffs_;
};

/// Head/tail split of a signal around its s largest blocks.
struct BlockApproximation {
  BlockSignal head;  // x_max(s)
  BlockSignal tail;  // x_-max(s)
  int s = 0;
  BlockSet kept_blocks;
};

/// ||x||_{2,I}: sum of block Euclidean norms.
double mixed_norm_2_1(const BlockSignal& x);

/// ||x||_{2,0}: number of blocks that are not bitwise zero.
int mixed_norm_2_0(const BlockSignal& x);

/// ||x||_{2,inf}: largest block Euclidean norm (0 for the zero signal).
double mixed_norm_2_inf(const BlockSignal& x);

/// ||x||_{2,2}: root of the sum of squared block norms; equals ||coeffs||_2.
double mixed_norm_2_2(const BlockSignal& x);

/// Blocks whose Euclidean norm exceeds `threshold` (default: nonzero blocks).
BlockSet block_support(const BlockSignal& x, double threshold = 0.0);

/// Keeps the s blocks of largest l2 norm; ties go to the lower block index.
/// Throws ParameterError unless 0 <= s <= num_blocks.
BlockApproximation best_block_approx(const BlockSignal& x, int s);

}  // namespace blockcs
