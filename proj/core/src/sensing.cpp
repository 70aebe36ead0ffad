#include "blockcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockcs/error.hpp"
#include "blockcs/random.hpp"

namespace blockcs {

SensingMatrix::SensingMatrix(Matrix entries, BlockStructure structure)
    : entries_(std::move(entries)), structure_(std::move(structure)) {
  if (entries_.rows() < 1) throw ParameterError("sensing matrix needs at least one row");
  if (entries_.cols() != structure_.total_dim()) {
    throw ParameterError("sensing matrix has " + std::to_string(entries_.cols()) +
                         " columns but the structure spans " +
                         std::to_string(structure_.total_dim()));
  }
}

Matrix SensingMatrix::restricted_columns(const BlockSet& blocks) const {
  Matrix sub(rows(), structure_.support_dim(blocks));
  int col = 0;
  for (int i : blocks) {
    sub.middleCols(col, structure_.length(i)) = column_block(i);
    col += structure_.length(i);
  }
  return sub;
}

Vector apply(const SensingMatrix& phi, const BlockSignal& x) {
  if (x.structure() != phi.structure()) {
    throw ParameterError("apply: signal structure does not match the matrix column structure");
  }
  return phi.entries() * x.coeffs();
}

Vector apply(const SensingMatrix& phi, const Vector& v) {
  if (v.size() != phi.cols()) {
    throw ParameterError("apply: vector length " + std::to_string(v.size()) + " vs " +
                         std::to_string(phi.cols()) + " columns");
  }
  return phi.entries() * v;
}

SensingMatrix gen_gaussian(int rows, const BlockStructure& structure, std::uint64_t seed) {
  if (rows < 1) throw ParameterError("gen_gaussian: M must be >= 1");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  Matrix a(rows, structure.total_dim());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < a.cols(); ++c) a(r, c) = scale * rng.normal();
  }
  return SensingMatrix(std::move(a), structure);
}

SensingMatrix identity_matrix(const BlockStructure& structure) {
  const int n = structure.total_dim();
  return SensingMatrix(Matrix::Identity(n, n), structure);
}

namespace {

// Replaces every column block by the orthonormal polar factor of itself.
void orthonormalize_blocks(Matrix& a, const BlockStructure& structure) {
  for (int i = 0; i < structure.num_blocks(); ++i) {
    auto blk = a.middleCols(structure.offset(i), structure.length(i));
    Eigen::JacobiSVD<Matrix> svd(blk, Eigen::ComputeThinU | Eigen::ComputeThinV);
    blk = svd.matrixU() * svd.matrixV().transpose();
  }
}

double max_cross_coherence(const Matrix& a, const BlockStructure& structure) {
  double worst = 0.0;
  for (int i = 0; i < structure.num_blocks(); ++i) {
    for (int j = i + 1; j < structure.num_blocks(); ++j) {
      const Matrix cross = a.middleCols(structure.offset(i), structure.length(i)).transpose() *
                           a.middleCols(structure.offset(j), structure.length(j));
      worst = std::max(worst, Eigen::JacobiSVD<Matrix>(cross).singularValues()[0]);
    }
  }
  return worst;
}

}  // namespace

SensingMatrix gen_block_incoherent(int rows, const BlockStructure& structure, std::uint64_t seed,
                                   const IncoherenceOptions& options) {
  const auto& lengths = structure.lengths();
  if (rows < *std::max_element(lengths.begin(), lengths.end())) {
    throw ParameterError("gen_block_incoherent: M must be at least the largest block length");
  }
  if (!(options.target_coherence > 0.0) || options.max_iterations < 0) {
    throw ParameterError("gen_block_incoherent: invalid options");
  }
  const int n = structure.total_dim();
  const int l = structure.num_blocks();
  Rng rng(seed);
  Matrix a(rows, n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = rng.normal();
  }
  orthonormalize_blocks(a, structure);
  // Stop a little above the clipping level: the rank projection never lands
  // exactly on the clipped Gram matrix.
  const double stop = options.target_coherence + 0.02;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (rows >= n || max_cross_coherence(a, structure) <= stop) break;
    Matrix gram = a.transpose() * a;
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j < l; ++j) {
        auto blk = gram.block(structure.offset(i), structure.offset(j), structure.length(i),
                              structure.length(j));
        if (i == j) {
          blk.setIdentity();
          continue;
        }
        Eigen::JacobiSVD<Matrix> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vector clipped = svd.singularValues().cwiseMin(options.target_coherence);
        blk = svd.matrixU().leftCols(clipped.size()) * clipped.asDiagonal() *
              svd.matrixV().leftCols(clipped.size()).transpose();
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Vector top = eig.eigenvalues().tail(rows).cwiseMax(0.0).cwiseSqrt();
    a = top.asDiagonal() * eig.eigenvectors().rightCols(rows).transpose();
    orthonormalize_blocks(a, structure);
  }
  return SensingMatrix(std::move(a), structure);
}

SharpnessInstance sharpness_instance(double t, int s, int d, int l) {
  if (!(t > 0.0 && t < 4.0 / 3.0)) {
    throw ParameterError("sharpness_instance: t must lie in (0, 4/3)");
  }
  if (s < 1 || d < 1) throw ParameterError("sharpness_instance: s and d must be >= 1");
  if (l <= 2 * s) {
    throw ParameterError("sharpness_instance: 2s < l violated (s = " + std::to_string(s) +
                         ", l = " + std::to_string(l) + ")");
  }
  const auto structure = BlockStructure::uniform(l, d);
  const int n = structure.total_dim();
  const int head = 2 * s * d;

  BlockSignal x1(structure);
  x1.coeffs().head(head).setConstant(1.0 / std::sqrt(static_cast<double>(head)));

  const Vector& u = x1.coeffs();
  Matrix phi = Matrix::Identity(n, n) - u * u.transpose();
  phi *= 1.0 / std::sqrt(1.0 - t / 4.0);

  BlockSignal x0(structure);
  x0.coeffs().head(s * d).setOnes();
  BlockSignal x_hat(structure);
  x_hat.coeffs().segment(s * d, s * d).setConstant(-1.0);

  return SharpnessInstance{SensingMatrix(std::move(phi), structure), std::move(x1), std::move(x0),
                           std::move(x_hat), t, s, d, l};
}

}  // namespace blockcs
