#pragma once

#include <optional>
#include <string_view>

#include "blockcs/block_model.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs {

struct SolverConfig {
  int max_iters = 50000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  /// Initial splitting penalty; adapted by residual balancing.
  double penalty = 1.0;
  /// Relaxation parameter in [1, 1.9].
  double over_relaxation = 1.0;
  double feasibility_tol = 1e-8;
  /// Iterations between penalty adaptations (0 disables adaptation).
  int adapt_interval = 50;
  double adapt_factor = 2.0;

  /// Throws ParameterError when a field is out of range.
  void validate() const;
};

enum class SolverStatus { kConverged, kMaxIterations, kInfeasible };

std::string_view to_string(SolverStatus status) noexcept;

struct RecoveryResult {
  BlockSignal estimate;
  double objective = 0.0;        // ||x*||_{2,I}
  double feasibility_gap = 0.0;  // ||Phi x* - b||_2, or its excess over rho
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  SolverStatus status = SolverStatus::kMaxIterations;
  double final_penalty = 0.0;
  /// Distance from b to the range of Phi, measured before iterating.
  double range_distance = 0.0;
  std::optional<double> error_vector_norm{};  // ||x* - x_true||_2
};

/// Blockwise shrinkage y[i] = max(0, 1 - tau/||x[i]||) x[i]; the proximal
/// map of tau * ||.||_{2,I}. Blocks with norm <= tau become exactly zero.
BlockSignal block_soft_threshold(const BlockSignal& x, double tau);

/// min ||x||_{2,I} subject to Phi x = b.
RecoveryResult solve_noiseless(const SensingMatrix& phi, const Vector& b,
                               const SolverConfig& cfg = {});

/// min ||x||_{2,I} subject to ||Phi x - b||_2 <= rho.
RecoveryResult solve_noisy(const SensingMatrix& phi, const Vector& b, double rho,
                           const SolverConfig& cfg = {});

/// Fills result.error_vector_norm with ||estimate - truth||_2.
void record_error(RecoveryResult& result, const BlockSignal& truth);

}  // namespace blockcs
