// blockcs: command-line front end for block-sparse recovery experiments.
//
// Exit codes: 0 success, 1 invalid input, 2 I/O error, 3 a required solve
// did not converge.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "blockcs/error.hpp"
#include "blockcs/experiment.hpp"
#include "blockcs/identities.hpp"
#include "blockcs/io.hpp"
#include "blockcs/oracle.hpp"
#include "blockcs/random.hpp"
#include "blockcs/recovery_solver.hpp"
#include "blockcs/rip_analysis.hpp"
#include "blockcs/sensing.hpp"

namespace {

using namespace blockcs;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitNoConvergence = 3;

struct Globals {
  std::uint64_t seed = 42;
  std::string out;
  int threads = 1;
  std::string config;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(g.out, text);
  }
}

std::optional<std::filesystem::path> opt_path(const std::string& p) {
  if (p.empty()) return std::nullopt;
  return std::filesystem::path(p);
}

void add_solver_options(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--primal-tol", cfg.primal_tol, "Primal residual tolerance")->capture_default_str();
  cmd->add_option("--dual-tol", cfg.dual_tol, "Dual residual tolerance")->capture_default_str();
  cmd->add_option("--feasibility-tol", cfg.feasibility_tol, "Feasibility tolerance")->capture_default_str();
  cmd->add_option("--penalty", cfg.penalty, "Initial splitting penalty")->capture_default_str();
  cmd->add_option("--relaxation", cfg.over_relaxation, "Over-relaxation in [1, 1.9]")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse recovery toolkit: l2/l1 solvers, exact block RIC, recovery bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (stdout when omitted; a path stem for sweep)");
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "ExperimentSpec JSON file (sweep)");

  // recover
  std::string matrix_path, structure_path, obs_path, truth_path;
  double rho = 0.0;
  SolverConfig solver;
  auto* recover = app.add_subcommand("recover", "Solve min ||x||_{2,I} s.t. ||Phi x - b||_2 <= rho");
  recover->add_option("--matrix", matrix_path, "Matrix file (.json, or .csv with a structure sidecar)")->required();
  recover->add_option("--structure", structure_path, "Structure JSON for CSV matrices");
  recover->add_option("--obs", obs_path, "Observation vector file")->required();
  recover->add_option("--rho", rho, "Noise radius (0 = equality constraint)")->capture_default_str();
  recover->add_option("--truth", truth_path, "True signal JSON; adds error_vector_norm");
  add_solver_options(recover, solver);

  // ric
  int order = 0;
  std::uint64_t cap = 1'000'000;
  auto* ric = app.add_subcommand("ric", "Exact block restricted isometry constant");
  ric->add_option("--matrix", matrix_path, "Matrix file")->required();
  ric->add_option("--structure", structure_path, "Structure JSON for CSV matrices");
  ric->add_option("--order", order, "Block sparsity order s")->required();
  ric->add_option("--cap", cap, "Maximum number of supports to enumerate")->capture_default_str();

  // bound
  double t = 1.0, delta = 0.0, tail = 0.0;
  int s = 2;
  std::string formula = "both";
  auto* bound = app.add_subcommand("bound", "Check the RIC condition and evaluate the error bounds");
  bound->add_option("--t", t, "Order multiplier t in (0, 4/3)")->capture_default_str();
  bound->add_option("--s", s, "Sparsity s")->capture_default_str();
  bound->add_option("--delta", delta, "Block RIC of order ts")->required();
  bound->add_option("--rho", rho, "Noise radius")->capture_default_str();
  bound->add_option("--tail", tail, "||x_-max(s)||_{2,I}")->capture_default_str();
  bound->add_option("--formula", formula, "eq39, eq40 or both")
      ->check(CLI::IsMember({"eq39", "eq40", "both"}))
      ->capture_default_str();

  // oracle
  int smax = 1;
  double residual_tol = 1e-8;
  auto* oracle = app.add_subcommand("oracle", "Brute-force sparsest block fit");
  oracle->add_option("--matrix", matrix_path, "Matrix file")->required();
  oracle->add_option("--structure", structure_path, "Structure JSON for CSV matrices");
  oracle->add_option("--obs", obs_path, "Observation vector file")->required();
  oracle->add_option("--smax", smax, "Largest support size to search")->required();
  oracle->add_option("--tol", residual_tol, "Residual tolerance")->capture_default_str();
  oracle->add_option("--cap", cap, "Maximum number of supports")->capture_default_str();

  // counterexample
  int d = 2, l = 6;
  auto* counter = app.add_subcommand("counterexample", "Demonstrate that the RIC threshold is sharp");
  counter->add_option("--t", t, "t in (0, 4/3)")->capture_default_str();
  counter->add_option("--s", s, "Sparsity s")->capture_default_str();
  counter->add_option("--d", d, "Block length")->capture_default_str();
  counter->add_option("--l", l, "Number of blocks (> 2s)")->capture_default_str();
  add_solver_options(counter, solver);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment described by --config");

  // verify-identities
  int trials = 200, max_blocks = 8;
  auto* identities = app.add_subcommand("verify-identities", "Randomized identity and lemma verification");
  identities->add_option("--trials", trials, "Instances per identity")->capture_default_str();
  identities->add_option("--max-blocks", max_blocks, "Largest l (or s) drawn")->capture_default_str();

  // gen
  int rows = 12, num_blocks = 12, block_length = 2, sparsity = 0;
  std::string ensemble = "gaussian", signal_out, obs_out;
  auto* gen = app.add_subcommand("gen", "Write a random sensing matrix (and optionally a sparse signal)");
  gen->add_option("--m", rows, "Rows M")->capture_default_str();
  gen->add_option("--blocks", num_blocks, "Number of blocks l")->capture_default_str();
  gen->add_option("--block-length", block_length, "Block length d")->capture_default_str();
  gen->add_option("--ensemble", ensemble, "gaussian, incoherent or identity")
      ->check(CLI::IsMember({"gaussian", "incoherent", "identity"}))
      ->capture_default_str();
  gen->add_option("--sparsity", sparsity, "Also draw a block s-sparse signal");
  gen->add_option("--signal-out", signal_out, "Signal JSON path");
  gen->add_option("--obs-out", obs_out, "Observation JSON path (Phi x)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*recover) {
      const auto phi = io::load_matrix(matrix_path, opt_path(structure_path));
      const auto b = io::load_vector(obs_path);
      auto result = rho > 0.0 ? solve_noisy(phi, b, rho, solver) : solve_noiseless(phi, b, solver);
      if (!truth_path.empty()) record_error(result, io::load_signal(truth_path));
      emit(g, io::recovery_result_json(result));
      if (!result.converged) {
        std::cerr << "recover: solver stopped without converging (" << to_string(result.status) << ")\n";
        return kExitNoConvergence;
      }
    } else if (*ric) {
      const auto phi = io::load_matrix(matrix_path, opt_path(structure_path));
      const auto start = std::chrono::steady_clock::now();
      const auto cert = exact_block_ric(phi, order, RicOptions{cap, g.threads});
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(g, io::ric_report_json(cert, wall));
    } else if (*bound) {
      const auto cond = check_condition(delta, t, s);
      std::string text = "{\n\"condition\": " + io::condition_report_json(cond);
      if (cond.satisfied) {
        if (formula != "eq40") text += ",\n\"eq39\": " + io::bound_report_json(error_bound_eq39(t, s, delta, rho, tail));
        if (formula != "eq39") text += ",\n\"eq40\": " + io::bound_report_json(error_bound_eq40(t, s, delta, rho, tail));
      }
      text += "}\n";
      emit(g, text);
    } else if (*oracle) {
      const auto phi = io::load_matrix(matrix_path, opt_path(structure_path));
      const auto b = io::load_vector(obs_path);
      const auto sol = brute_force_l20(phi, b, smax, OracleOptions{residual_tol, cap});
      emit(g, io::oracle_solution_json(sol));
    } else if (*counter) {
      const auto report = demo_counterexample(t, s, d, l, solver);
      std::cout << format_counterexample(report);
      if (!g.out.empty()) io::write_text(g.out, counterexample_json(report));
      if (!report.solver_converged) return kExitNoConvergence;
    } else if (*sweep) {
      if (g.config.empty()) throw ParameterError("sweep: --config FILE is required");
      auto spec = experiment_spec_from_json(io::read_text(g.config));
      if (app.get_option("--seed")->count() > 0) spec.seed = g.seed;
      if (app.get_option("--threads")->count() > 0) spec.threads = g.threads;
      if (!g.out.empty()) spec.output_path = g.out;
      if (spec.output_path.empty()) throw ParameterError("sweep: set output_path in the config or pass --out");
      const auto report = run_experiment(spec);
      write_report(report, spec.output_path);
      std::cout << summary_json(report);
    } else if (*identities) {
      emit(g, identity_suite_json(run_identity_suite(g.seed, trials, max_blocks)));
    } else if (*gen) {
      const auto structure = BlockStructure::uniform(num_blocks, block_length);
      Rng rng(g.seed);
      const auto matrix_seed = rng.next();
      const auto phi = ensemble == "gaussian"     ? gen_gaussian(rows, structure, matrix_seed)
                       : ensemble == "incoherent" ? gen_block_incoherent(rows, structure, matrix_seed)
                                                  : identity_matrix(structure);
      emit(g, io::to_json(phi));
      if (sparsity > 0) {
        const auto x = random_block_sparse(rng, structure, random_support(rng, num_blocks, sparsity));
        if (!signal_out.empty()) io::write_text(signal_out, io::to_json(x));
        if (!obs_out.empty()) io::write_text(obs_out, io::vector_to_json(apply(phi, x)));
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
