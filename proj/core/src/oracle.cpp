#include "blockcs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"

namespace blockcs {

RestrictedFit restricted_least_squares(const SensingMatrix& phi, const Vector& b,
                                       const BlockSet& support, double rank_cutoff) {
  if (b.size() != phi.rows()) throw ParameterError("restricted_least_squares: observation length mismatch");
  RestrictedFit fit{BlockSignal(phi.structure()), b.norm()};
  if (support.empty()) return fit;

  const Matrix sub = phi.restricted_columns(support);
  Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_cutoff);
  const Vector coef = svd.solve(b);
  fit.residual = (sub * coef - b).norm();

  int pos = 0;
  for (int i : support) {
    const int d = phi.structure().length(i);
    fit.estimate.block(i) = coef.segment(pos, d);
    pos += d;
  }
  return fit;
}

OracleSolution brute_force_l20(const SensingMatrix& phi, const Vector& b, int s_max,
                               const OracleOptions& options) {
  const int l = phi.structure().num_blocks();
  if (s_max < 0 || s_max > l) {
    throw ParameterError("brute_force_l20: s_max = " + std::to_string(s_max) + " outside [0, " +
                         std::to_string(l) + "]");
  }
  std::uint64_t total = 0;
  for (int k = 0; k <= s_max; ++k) {
    const std::uint64_t c = binomial(l, k);
    total = (total > std::numeric_limits<std::uint64_t>::max() - c)
                ? std::numeric_limits<std::uint64_t>::max()
                : total + c;
  }
  if (total > options.cap) {
    throw CapacityError("brute_force_l20: " + std::to_string(total) +
                            " supports up to size " + std::to_string(s_max) +
                            " exceeds the cap of " + std::to_string(options.cap),
                        total, options.cap);
  }

  OracleSolution sol{.found = false, .estimate = BlockSignal(phi.structure())};
  sol.residual = std::numeric_limits<double>::infinity();

  for (int k = 0; k <= s_max; ++k) {
    double best = std::numeric_limits<double>::infinity();
    BlockSet best_support;
    BlockSignal best_estimate(phi.structure());
    for (Combinations c(l, k); c.valid(); c.next()) {
      ++sol.supports_searched;
      auto fit = restricted_least_squares(phi, b, c.current(), options.rank_cutoff);
      if (fit.residual < best) {
        best = fit.residual;
        best_support = c.current();
        best_estimate = std::move(fit.estimate);
      }
    }
    if (best <= options.residual_tol) {
      sol.found = true;
      sol.support = std::move(best_support);
      sol.estimate = std::move(best_estimate);
      sol.residual = best;
      break;
    }
    if (best < sol.residual) {
      sol.residual = best;
      sol.support = std::move(best_support);
      sol.estimate = std::move(best_estimate);
    }
  }
  sol.sparsity = mixed_norm_2_0(sol.estimate);
  return sol;
}

std::string_view to_string(CheckVerdict verdict) noexcept {
  switch (verdict) {
    case CheckVerdict::kHolds: return "holds";
    case CheckVerdict::kViolated: return "violated";
    case CheckVerdict::kHypothesisNotMet: return "hypothesis_not_met";
  }
  return "unknown";
}

LemmaA1Report lemmaA1_check(std::span<const double> a, int s, double alpha, double psi) {
  constexpr double kSlack = 1e-12;
  const int l = static_cast<int>(a.size());
  if (s < 1 || s > l) throw ParameterError("lemmaA1_check: s must lie in [1, len(a)]");
  if (!(alpha >= 1.0)) throw ParameterError("lemmaA1_check: alpha must be >= 1");
  if (!(psi >= 0.0)) throw ParameterError("lemmaA1_check: psi must be >= 0");
  for (int i = 0; i < l; ++i) {
    if (!(a[i] >= 0.0)) throw ParameterError("lemmaA1_check: entries must be nonnegative");
    if (i > 0 && a[i] > a[i - 1]) throw ParameterError("lemmaA1_check: sequence must be nonincreasing");
  }

  LemmaA1Report r;
  for (int i = 0; i < l; ++i) {
    const double p = std::pow(a[i], alpha);
    if (i < s) {
      r.head_sum += a[i];
      r.head_power_sum += p;
    } else {
      r.tail_sum += a[i];
      r.tail_power_sum += p;
    }
  }
  const double sd = static_cast<double>(s);
  r.general_rhs = sd * std::pow(std::pow(r.head_power_sum / sd, 1.0 / alpha) + psi / sd, alpha);

  auto within = [&](double lhs, double rhs) { return lhs <= rhs + kSlack * std::max(std::abs(rhs), 1.0); };

  if (!within(r.tail_sum, r.head_sum + psi)) {
    r.verdict = CheckVerdict::kHypothesisNotMet;
    return r;
  }
  r.general_form_holds = within(r.tail_power_sum, r.general_rhs);
  r.zero_psi_form_holds = within(r.tail_sum, r.head_sum) && within(r.tail_power_sum, r.head_power_sum);
  const bool ok = psi == 0.0 ? (r.general_form_holds && r.zero_psi_form_holds) : r.general_form_holds;
  r.verdict = ok ? CheckVerdict::kHolds : CheckVerdict::kViolated;
  return r;
}

ConeReport cone_constraint_check(const BlockSignal& h, const BlockSignal& x, int s) {
  if (h.structure() != x.structure()) throw ParameterError("cone_constraint_check: structures differ");
  const auto h_split = best_block_approx(h, s);
  const auto x_split = best_block_approx(x, s);
  ConeReport r;
  r.lhs = mixed_norm_2_1(h_split.tail);
  r.rhs = mixed_norm_2_1(h_split.head) + 2.0 * mixed_norm_2_1(x_split.tail);
  r.slack = r.rhs - r.lhs;
  r.holds = r.slack >= 0.0;
  return r;
}

}  // namespace blockcs
