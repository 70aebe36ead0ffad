#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockcs/recovery_solver.hpp"

namespace blockcs {

enum class ExperimentKind {
  kRecoveryTrials,
  kPhaseTransition,
  kCounterexample,
  kRicSweep,
  kIdentitySuite,
};

enum class Ensemble { kGaussian, kIdentity, kIncoherent };

std::string_view to_string(ExperimentKind kind) noexcept;
std::string_view to_string(Ensemble ensemble) noexcept;

struct ExperimentGrid {
  std::vector<int> rows{12};  // M values
  int num_blocks = 12;
  int block_length = 2;
  std::vector<int> sparsity{2};
  std::vector<double> t{1.0};
  std::vector<double> rho{0.0};
  int trials = 10;
  Ensemble ensemble = Ensemble::kGaussian;
  int max_blocks = 8;  // identity suite only
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kRecoveryTrials;
  std::uint64_t seed = 42;
  ExperimentGrid grid;
  SolverConfig solver;
  std::string output_path;  // stem: <stem>.csv and <stem>.json
  double success_tol = 1e-5;
  int threads = 1;
  /// Compute the exact block RIC (order floor(t s)) for every trial.
  bool compute_ric = true;
  std::uint64_t ric_cap = 1'000'000;
  /// Record wall time per trial. Off by default so outputs are bit-identical.
  bool record_timing = false;

  /// Throws ParameterError for empty grids, trials < 1, bad sizes.
  void validate() const;
};

/// Parses an ExperimentSpec JSON document (see README for the schema).
ExperimentSpec experiment_spec_from_json(std::string_view text);

struct TrialRecord {
  std::uint64_t trial_id = 0;
  std::uint64_t seed_stream = 0;
  int rows = 0;
  int cols = 0;
  int num_blocks = 0;
  int block_length = 0;
  int s = 0;
  double t = 1.0;
  double rho = 0.0;
  std::optional<double> delta;
  bool condition_ok = false;
  std::optional<double> recovery_error;
  std::optional<double> bound_eq39;  // present only when condition_ok
  std::optional<double> bound_eq40;
  bool converged = false;
  bool success = false;
  double wall_time = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Writes the CSV header (with a "# success_tol=" comment line) and rows.
std::string format_trial_csv(const std::vector<TrialRecord>& records, double success_tol);
/// Inverse of format_trial_csv. Throws IoError on malformed input.
std::vector<TrialRecord> parse_trial_csv(std::string_view text, double* success_tol = nullptr);

struct CellSummary {
  int rows = 0;
  int s = 0;
  double t = 1.0;
  double rho = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  int condition_ok = 0;
  double max_bound_violation = 0.0;
};

struct CounterexampleReport {
  double t = 0.0;
  int s = 0;
  int d = 0;
  int l = 0;
  int order = 0;
  double delta = 0.0;
  double threshold = 0.0;
  double norm_x0 = 0.0;
  double norm_x_hat = 0.0;
  double measurement_gap = 0.0;  // ||Phi (x0 - x_hat)||_2
  double solver_objective = 0.0;
  bool solver_converged = false;
  bool non_unique_minimizer = false;
};

/// Builds the sharpness instance, certifies its RIC, and solves the
/// noiseless program on b = Phi x0.
CounterexampleReport demo_counterexample(double t, int s, int d, int l,
                                         const SolverConfig& cfg = {});
std::string format_counterexample(const CounterexampleReport& report);

struct IdentitySuiteReport {
  int trials = 0;
  int max_blocks = 0;
  double max_residual_eq11 = 0.0;
  double max_residual_eq12 = 0.0;
  double max_residual_eq13 = 0.0;
  double max_residual_eq14 = 0.0;
  int lemma24_checked = 0;
  int lemma24_violations = 0;
  int lemmaA1_checked = 0;
  int lemmaA1_violations = 0;
  int polytope_checked = 0;
  int polytope_failures = 0;
};

/// Randomized identity/lemma verification with `trials` instances per identity.
IdentitySuiteReport run_identity_suite(std::uint64_t seed, int trials, int max_blocks);

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<TrialRecord> records;
  std::vector<CellSummary> cells;
  double max_bound_violation = 0.0;
  std::optional<CounterexampleReport> counterexample;
  std::optional<IdentitySuiteReport> identities;
};

/// Executes the spec deterministically: trial i draws from stream_seed(seed, i)
/// and records are kept in trial-id order for any thread count.
ExperimentReport run_experiment(const ExperimentSpec& spec);

std::string summary_json(const ExperimentReport& report);
std::string counterexample_json(const CounterexampleReport& report);
std::string identity_suite_json(const IdentitySuiteReport& report);

/// Writes <stem>.json and, when there are trial records, <stem>.csv.
void write_report(const ExperimentReport& report, const std::filesystem::path& stem);

}  // namespace blockcs
