#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "blockcs/block_model.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs {

/// Result of the exhaustive l2/l0 search.
struct OracleSolution {
  bool found = false;
  BlockSignal estimate;
  BlockSet support{};
  int sparsity = 0;  // ||estimate||_{2,0}
  /// Residual of the returned estimate; when nothing fits, the best
  /// residual seen over all searched supports.
  double residual = 0.0;
  std::uint64_t supports_searched = 0;
};

struct OracleOptions {
  double residual_tol = 1e-8;
  std::uint64_t cap = 1'000'000;
  /// Singular values below cutoff * sigma_max are treated as zero.
  double rank_cutoff = 1e-10;
};

/// Minimum-norm least-squares fit of b using only the columns of `support`.
struct RestrictedFit {
  BlockSignal estimate;
  double residual = 0.0;
};

RestrictedFit restricted_least_squares(const SensingMatrix& phi, const Vector& b,
                                       const BlockSet& support, double rank_cutoff = 1e-10);

/// Sparsest block fit of b: for k = 0..s_max, tries every support of size k
/// and returns the smallest-residual one among the first k that fits within
/// residual_tol (ties: lexicographically smallest support).
/// Throws CapacityError when sum_{k<=s_max} C(l, k) exceeds the cap.
OracleSolution brute_force_l20(const SensingMatrix& phi, const Vector& b, int s_max,
                               const OracleOptions& options = {});

enum class CheckVerdict { kHolds, kViolated, kHypothesisNotMet };

std::string_view to_string(CheckVerdict verdict) noexcept;

/// Both sides of the power-sum tail inequality for a nonincreasing sequence.
struct LemmaA1Report {
  CheckVerdict verdict = CheckVerdict::kHypothesisNotMet;
  double tail_power_sum = 0.0;     // sum_{i>s} a_i^alpha
  double head_power_sum = 0.0;     // sum_{i<=s} a_i^alpha (psi = 0 right side)
  double general_rhs = 0.0;        // s ((head_power_sum / s)^{1/alpha} + psi/s)^alpha
  double head_sum = 0.0;           // sum_{i<=s} a_i
  double tail_sum = 0.0;           // sum_{i>s} a_i
  bool zero_psi_form_holds = false;  // only meaningful when psi == 0
  bool general_form_holds = false;
};

/// Checks sum_{i>s} a_i^alpha against both right-hand sides, given the
/// hypothesis sum_{i<=s} a_i + psi >= sum_{i>s} a_i. Verdicts use 1e-12
/// relative slack. Throws ParameterError for unsorted or negative input,
/// s outside [1, len], alpha < 1, or psi < 0.
LemmaA1Report lemmaA1_check(std::span<const double> a, int s, double alpha, double psi);

struct ConeReport {
  double lhs = 0.0;  // ||h_-max(s)||_{2,I}
  double rhs = 0.0;  // ||h_max(s)||_{2,I} + 2 ||x_-max(s)||_{2,I}
  double slack = 0.0;
  bool holds = false;
};

/// Null-space cone condition satisfied by the error h = x* - x of any
/// l2/l1 minimizer whose truth x is feasible.
ConeReport cone_constraint_check(const BlockSignal& h, const BlockSignal& x, int s);

}  // namespace blockcs
