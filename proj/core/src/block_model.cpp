#include "blockcs/block_model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "blockcs/error.hpp"

namespace blockcs {

BlockStructure::BlockStructure(std::vector<int> block_lengths) : lengths_(std::move(block_lengths)) {
  if (lengths_.empty()) throw ParameterError("block structure needs at least one block");
  offsets_.reserve(lengths_.size());
  int offset = 0;
  for (int d : lengths_) {
    if (d < 1) throw ParameterError("block lengths must be positive, got " + std::to_string(d));
    offsets_.push_back(offset);
    offset += d;
  }
  total_dim_ = offset;
}

BlockStructure BlockStructure::uniform(int num_blocks, int block_length) {
  if (num_blocks < 1) throw ParameterError("number of blocks must be positive");
  return BlockStructure(std::vector<int>(static_cast<std::size_t>(num_blocks), block_length));
}

int BlockStructure::support_dim(const BlockSet& blocks) const {
  int dim = 0;
  for (int i : blocks) dim += length(i);
  return dim;
}

std::vector<int> BlockStructure::coordinates(const BlockSet& blocks) const {
  std::vector<int> coords;
  coords.reserve(static_cast<std::size_t>(support_dim(blocks)));
  for (int i : blocks) {
    for (int k = 0; k < length(i); ++k) coords.push_back(offset(i) + k);
  }
  return coords;
}

BlockSignal::BlockSignal(BlockStructure structure)
    : structure_(std::move(structure)), coeffs_(Vector::Zero(structure_.total_dim())) {}

BlockSignal::BlockSignal(BlockStructure structure, Vector coeffs)
    : structure_(std::move(structure)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != structure_.total_dim()) {
    throw ParameterError("signal length " + std::to_string(coeffs_.size()) +
                         " does not match structure dimension " +
                         std::to_string(structure_.total_dim()));
  }
}

Vector BlockSignal::block_norms() const {
  Vector norms(num_blocks());
  for (int i = 0; i < num_blocks(); ++i) norms[i] = block_norm(i);
  return norms;
}

BlockSignal BlockSignal::restricted_to(const BlockSet& blocks) const {
  BlockSignal out(structure_);
  for (int i : blocks) out.block(i) = block(i);
  return out;
}

namespace {
void require_same_structure(const BlockSignal& a, const BlockSignal& b) {
  if (a.structure() != b.structure()) throw ParameterError("block structures differ");
}
}  // namespace

BlockSignal& BlockSignal::operator+=(const BlockSignal& other) {
  require_same_structure(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

BlockSignal& BlockSignal::operator-=(const BlockSignal& other) {
  require_same_structure(*this, other);
  coeffs_ -= other.coeffs_;
  return *this;
}

BlockSignal& BlockSignal::operator*=(double c) {
  coeffs_ *= c;
  return *this;
}

double mixed_norm_2_1(const BlockSignal& x) {
  double sum = 0.0;
  for (int i = 0; i < x.num_blocks(); ++i) sum += x.block_norm(i);
  return sum;
}

int mixed_norm_2_0(const BlockSignal& x) {
  int count = 0;
  for (int i = 0; i < x.num_blocks(); ++i) {
    const auto b = x.block(i);
    if (std::any_of(b.begin(), b.end(), [](double v) { return v != 0.0; })) ++count;
  }
  return count;
}

double mixed_norm_2_inf(const BlockSignal& x) {
  double best = 0.0;
  for (int i = 0; i < x.num_blocks(); ++i) best = std::max(best, x.block_norm(i));
  return best;
}

double mixed_norm_2_2(const BlockSignal& x) { return x.coeffs().norm(); }

BlockSet block_support(const BlockSignal& x, double threshold) {
  BlockSet support;
  for (int i = 0; i < x.num_blocks(); ++i) {
    if (x.block_norm(i) > threshold) support.push_back(i);
  }
  return support;
}

BlockApproximation best_block_approx(const BlockSignal& x, int s) {
  const int l = x.num_blocks();
  if (s < 0 || s > l) {
    throw ParameterError("best_block_approx: s = " + std::to_string(s) + " outside [0, " +
                         std::to_string(l) + "]");
  }
  const Vector norms = x.block_norms();
  std::vector<int> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps the lower index first among equal norms.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });

  BlockSet kept(order.begin(), order.begin() + s);
  std::sort(kept.begin(), kept.end());

  BlockApproximation approx{x.restricted_to(kept), x, s, kept};
  for (int i : kept) approx.tail.block(i).setZero();
  return approx;
}

}  // namespace blockcs
