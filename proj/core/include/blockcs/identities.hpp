#pragma once

#include <span>
#include <vector>

#include "blockcs/block_model.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs {

// Each verifier evaluates both sides of an exact identity by enumeration and
// returns the discrepancy. Sums use compensated accumulation.

/// sum over m-subsets J of sum_{j in J} x_j  vs  C(s-1, m-1) sum_j x_j.
/// Returns the max-norm of the difference. Requires 1 <= m <= s.
double verify_eq11(std::span<const Vector> vectors, int m);

/// sum over m-subsets of sum_{j != k} <x_j, x_k>  vs  C(s-2, m-2) sum_{j != k} <x_j, x_k>.
/// Requires 2 <= m <= s.
double verify_eq12(std::span<const Vector> vectors, int m);

/// Averaged m-block vs n-block energies of Phi x against (m - n) ||Phi x||^2 / l.
/// Requires l >= 2 and 1 <= m, n <= l.
double verify_eq13(const SensingMatrix& phi, const BlockSignal& x, int m, int n);

/// Disjoint (m, n)-block pair sum against (m + n)^2 ||Phi x||^2 / l^2.
/// Requires m, n >= 1 and l >= m + n.
double verify_eq14(const SensingMatrix& phi, const BlockSignal& x, int m, int n);

struct PolytopeTerm {
  double lambda = 0.0;
  BlockSignal u;
};

/// Convex combination x = sum_i lambda_i u_i of block s-sparse vectors u_i
/// with supp(u_i) in supp(x), ||u_i||_{2,I} = ||x||_{2,I}, ||u_i||_{2,inf} <= alpha.
struct PolytopeDecomposition {
  std::vector<PolytopeTerm> terms;
  double alpha = 0.0;
  int s = 0;
  BlockSignal source;
};

/// Greedy decomposition of x in the block polytope {||x||_{2,inf} <= alpha,
/// ||x||_{2,I} <= s alpha}. Each step peels off an extreme vector on the s
/// largest active blocks with the largest weight that keeps the remainder
/// in the polytope; every step zeroes a block or saturates one at alpha,
/// so at most (active blocks + 1) terms are produced.
///
/// Throws PreconditionError naming the violated membership inequality.
PolytopeDecomposition polytope_decompose(const BlockSignal& x, double alpha, int s);

/// Measured deviations of a decomposition from its defining properties.
struct PolytopeCheck {
  double alpha = 0.0;
  int s = 0;
  double weight_sum_error = 0.0;      // |sum lambda_i - 1|
  double reconstruction_error = 0.0;  // max-norm of sum lambda_i u_i - x
  double mixed_norm_error = 0.0;      // max_i | ||u_i||_{2,I} - ||x||_{2,I} |
  double max_inf_norm = 0.0;          // max_i ||u_i||_{2,inf}
  double energy = 0.0;                // sum lambda_i ||u_i||_{2,2}^2
  int max_sparsity = 0;               // max_i ||u_i||_{2,0}
  bool weights_in_unit_interval = true;
  bool supports_nested = true;        // supp(u_i) subset of supp(x)

  /// All properties within the given tolerances.
  bool ok(double tol = 1e-10) const;
};

PolytopeCheck check_decomposition(const PolytopeDecomposition& decomposition);

}  // namespace blockcs
