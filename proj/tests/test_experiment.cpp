#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "blockcs/error.hpp"
#include "blockcs/experiment.hpp"
#include "blockcs/io.hpp"
#include "blockcs/random.hpp"
#include "json.hpp"

namespace blockcs {
namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kRecoveryTrials;
  spec.seed = 7;
  spec.grid.rows = {10, 14};
  spec.grid.num_blocks = 8;
  spec.grid.block_length = 2;
  spec.grid.sparsity = {2, 3};
  spec.grid.rho = {0.0, 0.01};
  spec.grid.trials = 3;
  return spec;
}

TEST(Spec, ParsesJson) {
  auto spec = experiment_spec_from_json(R"({
    "kind": "phase_transition", "seed": 9, "output_path": "out/pt",
    "grid": {"m": [8, 12], "num_blocks": 6, "block_length": 3, "s": [1, 2], "t": [1.0],
             "rho": [0.0], "trials": 4, "ensemble": "incoherent"},
    "solver": {"max_iters": 1000, "over_relaxation": 1.5}
  })");
  EXPECT_EQ(spec.kind, ExperimentKind::kPhaseTransition);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(spec.grid.rows, (std::vector<int>{8, 12}));
  EXPECT_EQ(spec.grid.block_length, 3);
  EXPECT_EQ(spec.grid.ensemble, Ensemble::kIncoherent);
  EXPECT_EQ(spec.solver.max_iters, 1000);
  EXPECT_EQ(spec.solver.over_relaxation, 1.5);
  EXPECT_EQ(spec.output_path, "out/pt");
}

TEST(Spec, Rejections) {
  EXPECT_THROW(experiment_spec_from_json("{\"kind\": "), IoError);
  EXPECT_THROW(experiment_spec_from_json(R"({"kind": "bogus"})"), ParameterError);
  EXPECT_THROW(experiment_spec_from_json(R"({"kind": "recovery_trials", "grid": {"trials": 0}})"),
               ParameterError);
  EXPECT_THROW(experiment_spec_from_json(R"({"kind": "recovery_trials", "grid": {"m": []}})"), ParameterError);
  EXPECT_THROW(experiment_spec_from_json(R"({"kind": "recovery_trials", "grid": {"s": [13]}})"),
               ParameterError);
}

TEST(RunExperiment, IdentityEnsembleAlwaysSucceeds) {
  auto spec = small_spec();
  spec.grid.ensemble = Ensemble::kIdentity;
  spec.grid.rho = {0.0};
  spec.grid.rows = {16};
  auto report = run_experiment(spec);
  ASSERT_EQ(report.records.size(), 6u);
  for (const auto& r : report.records) {
    EXPECT_TRUE(r.success);
    EXPECT_EQ(*r.delta, 0.0);
  }
  for (const auto& c : report.cells) EXPECT_EQ(c.success_rate, 1.0);
}

TEST(RunExperiment, RecordsAreOrderedAndSeeded) {
  auto report = run_experiment(small_spec());
  ASSERT_EQ(report.records.size(), 2u * 2u * 2u * 3u);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    EXPECT_EQ(r.trial_id, i);
    EXPECT_EQ(r.seed_stream, stream_seed(7, i));
    EXPECT_EQ(r.bound_eq39.has_value(), r.condition_ok);
    EXPECT_EQ(r.bound_eq40.has_value(), r.condition_ok);
  }
  EXPECT_EQ(report.cells.size(), 8u);
}

TEST(RunExperiment, BitIdenticalAcrossRunsAndThreads) {
  auto spec = small_spec();
  auto a = run_experiment(spec);
  auto b = run_experiment(spec);
  spec.threads = 4;
  auto c = run_experiment(spec);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.records, c.records);
  EXPECT_EQ(format_trial_csv(a.records, spec.success_tol), format_trial_csv(c.records, spec.success_tol));
  EXPECT_EQ(summary_json(a), summary_json(b));
}

TEST(RunExperiment, CsvRoundTrip) {
  auto report = run_experiment(small_spec());
  const auto text = format_trial_csv(report.records, 1e-5);
  EXPECT_EQ(text.rfind("# success_tol=", 0), 0u);
  double tol = 0.0;
  auto parsed = parse_trial_csv(text, &tol);
  EXPECT_EQ(tol, 1e-5);
  EXPECT_EQ(parsed, report.records);
  EXPECT_EQ(format_trial_csv(parsed, tol), text);
  EXPECT_THROW(parse_trial_csv("# success_tol=1e-5\nnot,a,header\n"), IoError);
}

TEST(RunExperiment, CertifiedNoisyTrialsRespectBound) {
  ExperimentSpec spec;
  spec.seed = 3;
  spec.grid.rows = {16};
  spec.grid.num_blocks = 12;
  spec.grid.block_length = 2;
  spec.grid.sparsity = {2};
  spec.grid.rho = {1e-2};
  spec.grid.trials = 6;
  spec.grid.ensemble = Ensemble::kIncoherent;
  auto report = run_experiment(spec);
  for (const auto& r : report.records) {
    EXPECT_TRUE(r.condition_ok);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(*r.recovery_error, *r.bound_eq39);
  }
  EXPECT_EQ(report.max_bound_violation, 0.0);
}

TEST(RunExperiment, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "blockcs_experiment_report";
  std::filesystem::create_directories(dir);
  auto spec = small_spec();
  spec.grid.trials = 1;
  auto report = run_experiment(spec);
  write_report(report, dir / "run");
  const auto summary = nlohmann::json::parse(io::read_text(dir / "run.json"));
  EXPECT_EQ(summary["cells"].size(), 8u);
  EXPECT_EQ(parse_trial_csv(io::read_text(dir / "run.csv")), report.records);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(write_report(report, dir / "missing" / "run"), IoError);
}

TEST(Counterexample, DefaultInstance) {
  auto r = demo_counterexample(1.0, 2, 2, 6);
  EXPECT_NEAR(r.delta, 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.threshold, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.norm_x0, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.norm_x_hat, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_LE(r.measurement_gap, 1e-12);
  EXPECT_TRUE(r.solver_converged);
  EXPECT_NEAR(r.solver_objective, 2.0 * std::sqrt(2.0), 1e-6);
  EXPECT_TRUE(r.non_unique_minimizer);
  EXPECT_NE(format_counterexample(r).find("cannot"), std::string::npos);
}

TEST(Counterexample, SmallestInstance) {
  auto r = demo_counterexample(1.0, 1, 1, 3);
  EXPECT_NEAR(r.delta, 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.norm_x0, 1.0, 1e-15);
  EXPECT_NEAR(r.norm_x_hat, 1.0, 1e-15);
  EXPECT_NEAR(r.solver_objective, 1.0, 1e-6);
}

TEST(Counterexample, ViaSpecAndRejection) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kCounterexample;
  spec.grid.num_blocks = 6;
  spec.grid.block_length = 2;
  spec.grid.sparsity = {2};
  spec.grid.t = {1.0};
  auto report = run_experiment(spec);
  ASSERT_TRUE(report.counterexample.has_value());
  EXPECT_NEAR(report.counterexample->delta, 1.0 / 3.0, 1e-10);
  EXPECT_TRUE(report.counterexample->non_unique_minimizer);
  try {
    demo_counterexample(1.0, 2, 1, 4);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("2s < l"), std::string::npos);
  }
}

TEST(IdentitySuite, NoViolations) {
  auto r = run_identity_suite(5, 20, 6);
  EXPECT_LE(r.max_residual_eq11, 1e-10);
  EXPECT_LE(r.max_residual_eq12, 1e-10);
  EXPECT_LE(r.max_residual_eq13, 1e-10);
  EXPECT_LE(r.max_residual_eq14, 1e-10);
  EXPECT_EQ(r.lemma24_violations, 0);
  EXPECT_EQ(r.lemmaA1_violations, 0);
  EXPECT_EQ(r.polytope_failures, 0);
  EXPECT_GT(r.polytope_checked, 0);
}

// Success rate should fall as the sparsity grows; at most one upward step is
// tolerated per row of the grid.
TEST(PhaseTransition, SuccessNonincreasingInSparsity) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kPhaseTransition;
  spec.seed = 42;
  spec.grid.rows = {8, 12, 16, 20, 24};
  spec.grid.num_blocks = 12;
  spec.grid.block_length = 2;
  spec.grid.sparsity = {1, 2, 3, 4, 5};
  spec.grid.trials = 10;
  spec.compute_ric = false;
  spec.threads = 4;
  auto report = run_experiment(spec);
  for (int m : spec.grid.rows) {
    std::vector<double> rates;
    for (const auto& c : report.cells) {
      if (c.rows == m) rates.push_back(c.success_rate);
    }
    ASSERT_EQ(rates.size(), 5u);
    int increases = 0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
      if (rates[i] > rates[i - 1]) ++increases;
    }
    EXPECT_LE(increases, 1) << "M = " << m;
  }
  // The sweep spans the transition.
  double lo = 1.0, hi = 0.0;
  for (const auto& c : report.cells) {
    lo = std::min(lo, c.success_rate);
    hi = std::max(hi, c.success_rate);
  }
  EXPECT_EQ(hi, 1.0);
  EXPECT_LT(lo, 0.5);
}

}  // namespace
}  // namespace blockcs
