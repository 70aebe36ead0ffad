#include "blockcs/rip_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"

namespace blockcs {

std::pair<double, double> gram_extremes(const SensingMatrix& phi, const BlockSet& support) {
  const Matrix sub = phi.restricted_columns(support);
  Matrix gram = Matrix::Zero(sub.cols(), sub.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(sub.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return {ev[0], ev[ev.size() - 1]};
}

namespace {

struct RicPartial {
  double delta = -1.0;
  std::uint64_t worst_index = 0;
  BlockSet worst_support;
  double min_eig = std::numeric_limits<double>::infinity();
  double max_eig = -std::numeric_limits<double>::infinity();
};

RicPartial scan_supports(const SensingMatrix& phi, int s, int worker, int workers) {
  RicPartial part;
  std::uint64_t index = 0;
  for (Combinations c(phi.structure().num_blocks(), s); c.valid(); c.next(), ++index) {
    if (static_cast<int>(index % static_cast<std::uint64_t>(workers)) != worker) continue;
    const auto [lo, hi] = gram_extremes(phi, c.current());
    part.min_eig = std::min(part.min_eig, lo);
    part.max_eig = std::max(part.max_eig, hi);
    const double delta = std::max(hi - 1.0, 1.0 - lo);
    // Indices increase within a worker, so strict > keeps the first maximizer.
    if (delta > part.delta) {
      part.delta = delta;
      part.worst_index = index;
      part.worst_support = c.current();
    }
  }
  return part;
}

}  // namespace

RicCertificate exact_block_ric(const SensingMatrix& phi, int s, const RicOptions& options) {
  const int l = phi.structure().num_blocks();
  if (s < 1 || s > l) {
    throw ParameterError("exact_block_ric: order " + std::to_string(s) + " outside [1, " +
                         std::to_string(l) + "]");
  }
  const std::uint64_t count = binomial(l, s);
  if (count > options.cap) {
    throw CapacityError("exact_block_ric: C(" + std::to_string(l) + ", " + std::to_string(s) +
                            ") = " + std::to_string(count) + " supports exceeds the cap of " +
                            std::to_string(options.cap),
                        count, options.cap);
  }
  const int workers = static_cast<int>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(options.threads, 1)), 1, count));

  std::vector<RicPartial> parts(static_cast<std::size_t>(workers));
  if (workers == 1) {
    parts[0] = scan_supports(phi, s, 0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { parts[static_cast<std::size_t>(w)] = scan_supports(phi, s, w, workers); });
    }
  }

  RicCertificate cert;
  cert.order_s = s;
  cert.supports_enumerated = count;
  cert.min_eig = std::numeric_limits<double>::infinity();
  cert.max_eig = -std::numeric_limits<double>::infinity();
  const RicPartial* best = nullptr;
  for (const auto& p : parts) {
    cert.min_eig = std::min(cert.min_eig, p.min_eig);
    cert.max_eig = std::max(cert.max_eig, p.max_eig);
    if (p.delta < 0.0) continue;
    if (best == nullptr || p.delta > best->delta ||
        (p.delta == best->delta && p.worst_index < best->worst_index)) {
      best = &p;
    }
  }
  cert.delta = best->delta;
  cert.worst_support = best->worst_support;
  return cert;
}

std::string_view to_string(ConditionReason reason) noexcept {
  switch (reason) {
    case ConditionReason::kSatisfied: return "satisfied";
    case ConditionReason::kTOutOfRange: return "t_out_of_range";
    case ConditionReason::kOrderTooSmall: return "order_too_small";
    case ConditionReason::kDeltaAboveThreshold: return "delta_above_threshold";
    case ConditionReason::kInvalidInput: return "invalid_input";
  }
  return "unknown";
}

ConditionReport check_condition(double delta, double t, int s) {
  constexpr double kIntegerTol = 1e-9;
  ConditionReport report;
  report.threshold = (t > 0.0 && t < 4.0) ? t / (4.0 - t) : std::numeric_limits<double>::quiet_NaN();

  const double ts = t * static_cast<double>(s);
  if (std::isfinite(ts)) {
    const double nearest = std::round(ts);
    report.order_is_integer = std::abs(ts - nearest) <= kIntegerTol;
    report.effective_order = static_cast<int>(report.order_is_integer ? nearest : std::floor(ts));
  }

  if (!std::isfinite(delta) || !std::isfinite(t) || s < 1) {
    report.reason = ConditionReason::kInvalidInput;
  } else if (!(t > 0.0 && t < 4.0 / 3.0)) {
    report.reason = ConditionReason::kTOutOfRange;
  } else if (ts < 2.0 - kIntegerTol) {
    report.reason = ConditionReason::kOrderTooSmall;
  } else if (!(delta < report.threshold)) {
    report.reason = ConditionReason::kDeltaAboveThreshold;
  } else {
    report.reason = ConditionReason::kSatisfied;
    report.satisfied = true;
  }
  return report;
}

std::string_view to_string(BoundFormula formula) noexcept {
  return formula == BoundFormula::kEq39 ? "eq39" : "eq40";
}

namespace {

BoundReport bound_common(double t, int s, double delta, double rho, double tail_norm,
                         BoundFormula formula) {
  if (!(rho >= 0.0) || !(tail_norm >= 0.0) || !(delta >= 0.0)) {
    throw ParameterError("error bound: delta, rho and tail_norm must be nonnegative");
  }
  const auto cond = check_condition(delta, t, s);
  if (!cond.satisfied) {
    throw PreconditionError("error bound: recovery condition fails (" +
                            std::string(to_string(cond.reason)) + ")");
  }
  BoundReport r;
  r.t = t;
  r.s = s;
  r.delta = delta;
  r.rho = rho;
  r.tail_norm = tail_norm;
  r.formula = formula;
  r.t_tilde = std::max(std::sqrt(t), t);
  r.denom = t + (t - 4.0) * delta;
  r.noise_coeff = 2.0 * std::sqrt(2.0) * std::sqrt(1.0 + delta) * r.t_tilde / r.denom;
  const double cross = std::sqrt(r.denom * delta);
  const double root = std::sqrt(2.0 / static_cast<double>(s));
  if (formula == BoundFormula::kEq39) {
    r.tail_coeff = 0.5 * root * ((8.0 * delta + 4.0 * cross) / r.denom + 1.0);
  } else {
    r.tail_coeff = root * ((4.0 * delta + 2.0 * cross) / r.denom + std::sqrt(2.0));
  }
  r.bound = r.noise_coeff * rho + r.tail_coeff * tail_norm;
  return r;
}

}  // namespace

BoundReport error_bound_eq39(double t, int s, double delta, double rho, double tail_norm) {
  return bound_common(t, s, delta, rho, tail_norm, BoundFormula::kEq39);
}

BoundReport error_bound_eq40(double t, int s, double delta, double rho, double tail_norm) {
  return bound_common(t, s, delta, rho, tail_norm, BoundFormula::kEq40);
}

double lemma24_bound(double delta_s, double kappa) {
  if (!(kappa >= 2.0)) throw ParameterError("lemma24_bound: kappa must be >= 2");
  if (!(delta_s >= 0.0)) throw ParameterError("lemma24_bound: delta_s must be >= 0");
  return (2.0 * kappa - 1.0) * delta_s;
}

}  // namespace blockcs
