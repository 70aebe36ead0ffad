#include "blockcs/recovery_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockcs/error.hpp"

namespace blockcs {

void SolverConfig::validate() const {
  if (max_iters < 1) throw ParameterError("SolverConfig: max_iters must be >= 1");
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0) || !(feasibility_tol > 0.0)) {
    throw ParameterError("SolverConfig: tolerances must be positive");
  }
  if (!(penalty > 0.0)) throw ParameterError("SolverConfig: penalty must be positive");
  if (!(over_relaxation >= 1.0 && over_relaxation <= 1.9)) {
    throw ParameterError("SolverConfig: over_relaxation must lie in [1, 1.9]");
  }
  if (adapt_interval < 0 || !(adapt_factor > 1.0)) {
    throw ParameterError("SolverConfig: invalid penalty adaptation settings");
  }
}

std::string_view to_string(SolverStatus status) noexcept {
  switch (status) {
    case SolverStatus::kConverged: return "converged";
    case SolverStatus::kMaxIterations: return "max_iterations";
    case SolverStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

void shrink_blocks(const BlockStructure& structure, const Vector& in, double tau, Vector& out) {
  out.resize(in.size());
  for (int i = 0; i < structure.num_blocks(); ++i) {
    const auto src = in.segment(structure.offset(i), structure.length(i));
    auto dst = out.segment(structure.offset(i), structure.length(i));
    const double norm = src.norm();
    if (norm <= tau) {
      dst.setZero();
    } else {
      dst = (1.0 - tau / norm) * src;
    }
  }
}

double excess_over_ball(double distance, double radius) { return std::max(distance - radius, 0.0); }

// ADMM on  min ||y||_{2,I} + indicator(||z|| <= rho)
//          s.t. x - y = 0,  Phi x - b - z = 0.
// Both constraints share one penalty, so the x-update matrix I + Phi^T Phi
// does not depend on it and is factored once.
RecoveryResult run_admm(const SensingMatrix& phi, const Vector& b, double rho, bool noiseless,
                        const SolverConfig& cfg) {
  cfg.validate();
  if (b.size() != phi.rows()) {
    throw ParameterError("solver: observation length " + std::to_string(b.size()) + " vs " +
                         std::to_string(phi.rows()) + " rows");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("solver: rho must be finite and >= 0");

  const auto& structure = phi.structure();
  const Matrix& a = phi.entries();
  const int n = phi.cols();
  const int m = phi.rows();

  RecoveryResult result{.estimate = BlockSignal(structure)};

  const Vector least_squares = a.completeOrthogonalDecomposition().solve(b);
  result.range_distance = (a * least_squares - b).norm();
  if (result.range_distance > rho + cfg.feasibility_tol) {
    result.status = SolverStatus::kInfeasible;
    result.feasibility_gap = excess_over_ball(b.norm(), rho);
    result.final_penalty = cfg.penalty;
    return result;
  }

  Matrix system = Matrix::Identity(n, n);
  system.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  const Eigen::LLT<Matrix> factor(system);

  const double relax = cfg.over_relaxation;
  double penalty = cfg.penalty;
  Vector x = Vector::Zero(n), y = Vector::Zero(n), u = Vector::Zero(n);
  Vector z = Vector::Zero(m), w = Vector::Zero(m);
  Vector y_old(n), z_old(m), ax(m), x_relaxed(n), ax_relaxed(m), diff(m);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    x = factor.solve(y - u + a.transpose() * (z + b - w));
    ax.noalias() = a * x;
    x_relaxed = relax * x + (1.0 - relax) * y;
    ax_relaxed = relax * ax + (1.0 - relax) * (z + b);

    y_old = y;
    z_old = z;
    shrink_blocks(structure, x_relaxed + u, 1.0 / penalty, y);
    if (noiseless) {
      z.setZero();
    } else {
      z = ax_relaxed - b + w;
      const double norm = z.norm();
      if (norm > rho) z *= rho / norm;
    }
    u += x_relaxed - y;
    w += ax_relaxed - b - z;

    diff = ax - b - z;
    const double primal = std::sqrt((x - y).squaredNorm() + diff.squaredNorm());
    const double dual = penalty * ((y - y_old) + a.transpose() * (z - z_old)).norm();
    result.iterations = iter;
    result.primal_residual = primal;
    result.dual_residual = dual;

    if (primal <= cfg.primal_tol && dual <= cfg.dual_tol) {
      const double gap = excess_over_ball((a * y - b).norm(), noiseless ? 0.0 : rho);
      if (gap <= cfg.feasibility_tol) {
        result.converged = true;
        result.status = SolverStatus::kConverged;
        break;
      }
    }

    if (cfg.adapt_interval > 0 && iter % cfg.adapt_interval == 0) {
      if (primal > 10.0 * dual) {
        penalty *= cfg.adapt_factor;
        u /= cfg.adapt_factor;
        w /= cfg.adapt_factor;
      } else if (dual > 10.0 * primal) {
        penalty /= cfg.adapt_factor;
        u *= cfg.adapt_factor;
        w *= cfg.adapt_factor;
      }
    }
  }

  if (!result.converged) result.status = SolverStatus::kMaxIterations;
  result.final_penalty = penalty;
  result.estimate.coeffs() = y;
  result.objective = mixed_norm_2_1(result.estimate);
  result.feasibility_gap = excess_over_ball((a * y - b).norm(), noiseless ? 0.0 : rho);
  return result;
}

}  // namespace

BlockSignal block_soft_threshold(const BlockSignal& x, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("block_soft_threshold: tau must be >= 0");
  BlockSignal y(x.structure());
  shrink_blocks(x.structure(), x.coeffs(), tau, y.coeffs());
  return y;
}

RecoveryResult solve_noiseless(const SensingMatrix& phi, const Vector& b, const SolverConfig& cfg) {
  return run_admm(phi, b, 0.0, true, cfg);
}

RecoveryResult solve_noisy(const SensingMatrix& phi, const Vector& b, double rho,
                           const SolverConfig& cfg) {
  return run_admm(phi, b, rho, false, cfg);
}

void record_error(RecoveryResult& result, const BlockSignal& truth) {
  if (truth.structure() != result.estimate.structure()) {
    throw ParameterError("record_error: truth structure does not match the estimate");
  }
  result.error_vector_norm = (result.estimate.coeffs() - truth.coeffs()).norm();
}

}  // namespace blockcs
