#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "blockcs/block_model.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs {

/// Exact block restricted isometry constant of one order, with witnesses.
struct RicCertificate {
  int order_s = 0;
  double delta = 0.0;
  /// First support (lexicographically) attaining delta.
  BlockSet worst_support;
  /// Extremes of the Gram spectra over all enumerated supports.
  double min_eig = 0.0;
  double max_eig = 0.0;
  std::uint64_t supports_enumerated = 0;
};

struct RicOptions {
  std::uint64_t cap = 1'000'000;
  int threads = 1;
};

/// delta_{s|I} by enumeration of every block support of size s.
///
/// For each support S the extremal eigenvalues of Phi_S^T Phi_S are
/// computed with a dense symmetric eigensolver; delta is the larger of
/// max(lambda_max - 1) and max(1 - lambda_min). Deterministic for any
/// thread count. Throws ParameterError for s outside [1, l] and
/// CapacityError when C(l, s) exceeds the cap. Values >= 1 are returned
/// verbatim.
RicCertificate exact_block_ric(const SensingMatrix& phi, int s, const RicOptions& options = {});

/// Extremal eigenvalues of the Gram matrix restricted to `support`.
std::pair<double, double> gram_extremes(const SensingMatrix& phi, const BlockSet& support);

enum class ConditionReason {
  kSatisfied,
  kTOutOfRange,        // t not in (0, 4/3)
  kOrderTooSmall,      // t*s < 2
  kDeltaAboveThreshold,
  kInvalidInput,       // non-finite delta, s < 1
};

std::string_view to_string(ConditionReason reason) noexcept;

struct ConditionReport {
  bool satisfied = false;
  ConditionReason reason = ConditionReason::kInvalidInput;
  /// t/(4-t), NaN when t is outside (0, 4).
  double threshold = 0.0;
  /// Whether t*s is an integer (within 1e-9).
  bool order_is_integer = false;
  /// Order at which delta must be measured: t*s, or floor(t*s) otherwise.
  int effective_order = 0;
};

/// Sufficient condition delta_{ts|I} < t/(4-t) with 0 < t < 4/3 and ts >= 2.
ConditionReport check_condition(double delta, double t, int s);

enum class BoundFormula { kEq39, kEq40 };

std::string_view to_string(BoundFormula formula) noexcept;

/// Stable-recovery error bound ||x* - x||_2 <= noise_coeff * rho + tail_coeff * tail_norm.
struct BoundReport {
  double t = 0.0;
  int s = 0;
  double delta = 0.0;
  double rho = 0.0;
  double tail_norm = 0.0;
  double t_tilde = 0.0;  // max(sqrt(t), t)
  double denom = 0.0;    // t + (t - 4) delta
  double noise_coeff = 0.0;
  double tail_coeff = 0.0;
  double bound = 0.0;
  BoundFormula formula = BoundFormula::kEq39;
};

/// Primary bound. Throws PreconditionError when check_condition fails and
/// ParameterError for negative rho or tail_norm.
BoundReport error_bound_eq39(double t, int s, double delta, double rho, double tail_norm);

/// Alternative bound with the same noise term and a looser tail term.
BoundReport error_bound_eq40(double t, int s, double delta, double rho, double tail_norm);

/// Upper bound (2 kappa - 1) delta_s on delta_{kappa s}. Requires kappa >= 2, delta_s >= 0.
double lemma24_bound(double delta_s, double kappa);

}  // namespace blockcs
