#include "blockcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"
#include "blockcs/identities.hpp"
#include "blockcs/io.hpp"
#include "blockcs/oracle.hpp"
#include "blockcs/random.hpp"
#include "blockcs/rip_analysis.hpp"
#include "blockcs/sensing.hpp"
#include "json.hpp"

namespace blockcs {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::kRecoveryTrials: return "recovery_trials";
    case ExperimentKind::kPhaseTransition: return "phase_transition";
    case ExperimentKind::kCounterexample: return "counterexample";
    case ExperimentKind::kRicSweep: return "ric_sweep";
    case ExperimentKind::kIdentitySuite: return "identity_suite";
  }
  return "unknown";
}

std::string_view to_string(Ensemble ensemble) noexcept {
  switch (ensemble) {
    case Ensemble::kGaussian: return "gaussian";
    case Ensemble::kIdentity: return "identity";
    case Ensemble::kIncoherent: return "incoherent";
  }
  return "unknown";
}

namespace {

ExperimentKind kind_from_string(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  for (auto k : {ExperimentKind::kRecoveryTrials, ExperimentKind::kPhaseTransition,
                 ExperimentKind::kCounterexample, ExperimentKind::kRicSweep,
                 ExperimentKind::kIdentitySuite}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown experiment kind '" + name + "'");
}

Ensemble ensemble_from_string(const std::string& name) {
  for (auto e : {Ensemble::kGaussian, Ensemble::kIdentity, Ensemble::kIncoherent}) {
    if (to_string(e) == name) return e;
  }
  throw ParameterError("unknown ensemble '" + name + "'");
}

}  // namespace

void ExperimentSpec::validate() const {
  const auto& g = grid;
  if (g.trials < 1) throw ParameterError("experiment: trial count must be >= 1");
  if (g.num_blocks < 1 || g.block_length < 1) throw ParameterError("experiment: invalid block structure");
  if (g.sparsity.empty() || g.t.empty() || g.rho.empty() || g.rows.empty()) {
    throw ParameterError("experiment: grid ranges must be non-empty");
  }
  if (threads < 1) throw ParameterError("experiment: threads must be >= 1");
  if (!(success_tol > 0.0)) throw ParameterError("experiment: success_tol must be positive");
  solver.validate();
  for (double r : g.rho) {
    if (!(r >= 0.0)) throw ParameterError("experiment: rho values must be >= 0");
  }
  for (double t : g.t) {
    if (!(t > 0.0)) throw ParameterError("experiment: t values must be positive");
  }
  switch (kind) {
    case ExperimentKind::kRecoveryTrials:
    case ExperimentKind::kPhaseTransition:
    case ExperimentKind::kRicSweep:
      for (int m : g.rows) {
        if (m < 1) throw ParameterError("experiment: M values must be >= 1");
        if (g.ensemble == Ensemble::kIdentity && m != g.num_blocks * g.block_length) {
          throw ParameterError("experiment: the identity ensemble needs M = N");
        }
      }
      for (int s : g.sparsity) {
        if (s < 1 || s > g.num_blocks) throw ParameterError("experiment: s must lie in [1, l]");
      }
      break;
    case ExperimentKind::kCounterexample:
      if (g.num_blocks <= 2 * g.sparsity.front()) {
        throw ParameterError("experiment: counterexample needs 2s < l");
      }
      break;
    case ExperimentKind::kIdentitySuite:
      if (g.max_blocks < 2) throw ParameterError("experiment: max_blocks must be >= 2");
      break;
  }
}

ExperimentSpec experiment_spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw IoError(std::string("experiment spec: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.kind = kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.value("seed", spec.seed);
    spec.output_path = j.value("output_path", spec.output_path);
    spec.success_tol = j.value("success_tol", spec.success_tol);
    spec.threads = j.value("threads", spec.threads);
    spec.compute_ric = j.value("compute_ric", spec.compute_ric);
    spec.ric_cap = j.value("ric_cap", spec.ric_cap);
    spec.record_timing = j.value("record_timing", spec.record_timing);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      auto& out = spec.grid;
      out.rows = g.value("m", out.rows);
      out.num_blocks = g.value("num_blocks", out.num_blocks);
      out.block_length = g.value("block_length", out.block_length);
      out.sparsity = g.value("s", out.sparsity);
      out.t = g.value("t", out.t);
      out.rho = g.value("rho", out.rho);
      out.trials = g.value("trials", out.trials);
      out.max_blocks = g.value("max_blocks", out.max_blocks);
      if (g.contains("ensemble")) out.ensemble = ensemble_from_string(g.at("ensemble").get<std::string>());
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      auto& cfg = spec.solver;
      cfg.max_iters = s.value("max_iters", cfg.max_iters);
      cfg.primal_tol = s.value("primal_tol", cfg.primal_tol);
      cfg.dual_tol = s.value("dual_tol", cfg.dual_tol);
      cfg.penalty = s.value("penalty", cfg.penalty);
      cfg.over_relaxation = s.value("over_relaxation", cfg.over_relaxation);
      cfg.feasibility_tol = s.value("feasibility_tol", cfg.feasibility_tol);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char* kCsvHeader =
    "trial_id,seed_stream,rows,cols,num_blocks,block_length,s,t,rho,delta,condition_ok,"
    "recovery_error,bound_eq39,bound_eq40,converged,success,wall_time";

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(sep, start);
    out.emplace_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

double parse_double(const std::string& cell) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw IoError("trial CSV: bad number '" + cell + "'");
  }
  if (used != cell.size()) throw IoError("trial CSV: bad number '" + cell + "'");
  return v;
}

std::optional<double> parse_opt(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell);
}

std::uint64_t parse_u64(const std::string& cell) {
  std::size_t used = 0;
  std::uint64_t v;
  try {
    v = std::stoull(cell, &used);
  } catch (const std::exception&) {
    throw IoError("trial CSV: bad integer '" + cell + "'");
  }
  if (used != cell.size()) throw IoError("trial CSV: bad integer '" + cell + "'");
  return v;
}

bool parse_bool(const std::string& cell) {
  if (cell == "1") return true;
  if (cell == "0") return false;
  throw IoError("trial CSV: bad flag '" + cell + "'");
}

}  // namespace

std::string format_trial_csv(const std::vector<TrialRecord>& records, double success_tol) {
  std::ostringstream out;
  out << "# success_tol=" << io::format_double(success_tol) << "\n" << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.trial_id << ',' << r.seed_stream << ',' << r.rows << ',' << r.cols << ',' << r.num_blocks
        << ',' << r.block_length << ',' << r.s << ',' << io::format_double(r.t) << ','
        << io::format_double(r.rho) << ',' << opt(r.delta) << ',' << (r.condition_ok ? 1 : 0) << ','
        << opt(r.recovery_error) << ',' << opt(r.bound_eq39) << ',' << opt(r.bound_eq40) << ','
        << (r.converged ? 1 : 0) << ',' << (r.success ? 1 : 0) << ',' << io::format_double(r.wall_time)
        << "\n";
  }
  return out.str();
}

std::vector<TrialRecord> parse_trial_csv(std::string_view text, double* success_tol) {
  std::vector<TrialRecord> records;
  bool header_seen = false;
  for (auto& raw : split(text, '\n')) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# success_tol=";
      if (line.starts_with(key) && success_tol != nullptr) {
        *success_tol = parse_double(line.substr(key.size()));
      }
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw IoError("trial CSV: unexpected header");
      header_seen = true;
      continue;
    }
    const auto c = split(line, ',');
    if (c.size() != 17) throw IoError("trial CSV: expected 17 columns");
    TrialRecord r;
    r.trial_id = parse_u64(c[0]);
    r.seed_stream = parse_u64(c[1]);
    r.rows = static_cast<int>(parse_u64(c[2]));
    r.cols = static_cast<int>(parse_u64(c[3]));
    r.num_blocks = static_cast<int>(parse_u64(c[4]));
    r.block_length = static_cast<int>(parse_u64(c[5]));
    r.s = static_cast<int>(parse_u64(c[6]));
    r.t = parse_double(c[7]);
    r.rho = parse_double(c[8]);
    r.delta = parse_opt(c[9]);
    r.condition_ok = parse_bool(c[10]);
    r.recovery_error = parse_opt(c[11]);
    r.bound_eq39 = parse_opt(c[12]);
    r.bound_eq40 = parse_opt(c[13]);
    r.converged = parse_bool(c[14]);
    r.success = parse_bool(c[15]);
    r.wall_time = parse_double(c[16]);
    records.push_back(r);
  }
  if (!header_seen) throw IoError("trial CSV: missing header");
  return records;
}

// ---------------------------------------------------------------------------
// Counterexample

CounterexampleReport demo_counterexample(double t, int s, int d, int l, const SolverConfig& cfg) {
  const auto inst = sharpness_instance(t, s, d, l);
  const auto cond = check_condition(0.0, t, s);
  if (cond.effective_order < 1) throw ParameterError("counterexample: t * s must be at least 1");

  CounterexampleReport r;
  r.t = t;
  r.s = s;
  r.d = d;
  r.l = l;
  r.order = cond.effective_order;
  r.delta = exact_block_ric(inst.phi, r.order).delta;
  r.threshold = cond.threshold;
  r.norm_x0 = mixed_norm_2_1(inst.x0);
  r.norm_x_hat = mixed_norm_2_1(inst.x_hat);
  r.measurement_gap = apply(inst.phi, inst.x0 - inst.x_hat).norm();

  const auto solved = solve_noiseless(inst.phi, apply(inst.phi, inst.x0), cfg);
  r.solver_objective = solved.objective;
  r.solver_converged = solved.converged;

  constexpr double kTol = 1e-10;
  const bool distinct = (inst.x0.coeffs() - inst.x_hat.coeffs()).norm() > 0.0;
  const bool sparse = mixed_norm_2_0(inst.x0) <= s && mixed_norm_2_0(inst.x_hat) <= s;
  r.non_unique_minimizer = distinct && sparse && r.measurement_gap <= kTol &&
                           std::abs(r.norm_x0 - r.norm_x_hat) <= kTol &&
                           solved.converged && r.solver_objective <= r.norm_x0 + 1e-6;
  return r;
}

std::string format_counterexample(const CounterexampleReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "sharpness instance t=" << r.t << " s=" << r.s << " d=" << r.d << " l=" << r.l << "\n"
      << "  block RIC of order " << r.order << ": " << r.delta << "\n"
      << "  threshold t/(4-t):      " << r.threshold << "\n"
      << "  ||x0||_{2,I}:           " << r.norm_x0 << "\n"
      << "  ||x_hat||_{2,I}:        " << r.norm_x_hat << "\n"
      << "  ||Phi(x0 - x_hat)||_2:  " << r.measurement_gap << "\n"
      << "  l2/l1 objective on b = Phi x0: " << r.solver_objective
      << (r.solver_converged ? "" : " (solver did not converge)") << "\n";
  if (r.non_unique_minimizer) {
    out << "  verdict: two distinct block " << r.s
        << "-sparse signals share the measurement and the minimal objective;\n"
        << "           l2/l1 minimization cannot identify x0\n";
  } else {
    out << "  verdict: non-uniqueness NOT demonstrated\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Identity suite

IdentitySuiteReport run_identity_suite(std::uint64_t seed, int trials, int max_blocks) {
  if (trials < 1) throw ParameterError("identity suite: trials must be >= 1");
  if (max_blocks < 2) throw ParameterError("identity suite: max_blocks must be >= 2");
  IdentitySuiteReport rep;
  rep.trials = trials;
  rep.max_blocks = max_blocks;

  auto rand_int = [](Rng& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };
  auto random_structure = [&](Rng& rng, int l) {
    std::vector<int> lengths(static_cast<std::size_t>(l));
    for (auto& d : lengths) d = rand_int(rng, 1, 3);
    return BlockStructure(lengths);
  };
  auto random_vectors = [&](Rng& rng, int count) {
    const int dim = rand_int(rng, 1, 6);
    std::vector<Vector> v;
    for (int i = 0; i < count; ++i) v.push_back(rng.normal_vector(dim));
    return v;
  };

  std::uint64_t stream = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int s = rand_int(rng, 1, max_blocks);
    const auto v = random_vectors(rng, s);
    rep.max_residual_eq11 = std::max(rep.max_residual_eq11, verify_eq11(v, rand_int(rng, 1, s)));
  }
  for (int k = 0; k < trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int s = rand_int(rng, 2, max_blocks);
    const auto v = random_vectors(rng, s);
    rep.max_residual_eq12 = std::max(rep.max_residual_eq12, verify_eq12(v, rand_int(rng, 2, s)));
  }
  for (int k = 0; k < trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int l = rand_int(rng, 2, max_blocks);
    const auto structure = random_structure(rng, l);
    const auto phi = gen_gaussian(rand_int(rng, 2, 8), structure, rng.next());
    const BlockSignal x(structure, rng.normal_vector(structure.total_dim()));
    rep.max_residual_eq13 = std::max(
        rep.max_residual_eq13, verify_eq13(phi, x, rand_int(rng, 1, l), rand_int(rng, 1, l)));
  }
  for (int k = 0; k < trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int l = rand_int(rng, 2, max_blocks);
    const auto structure = random_structure(rng, l);
    const auto phi = gen_gaussian(rand_int(rng, 2, 8), structure, rng.next());
    const BlockSignal x(structure, rng.normal_vector(structure.total_dim()));
    const int m = rand_int(rng, 1, l - 1);
    const int n = rand_int(rng, 1, l - m);
    rep.max_residual_eq14 = std::max(rep.max_residual_eq14, verify_eq14(phi, x, m, n));
  }

  // 6 x 12 Gaussian matrices with blocks of length 2: delta_4 <= 3 delta_2.
  const int lemma24_trials = std::max(1, trials / 4);
  for (int k = 0; k < lemma24_trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const auto phi = gen_gaussian(6, BlockStructure::uniform(6, 2), rng.next());
    const double d2 = exact_block_ric(phi, 2).delta;
    const double d4 = exact_block_ric(phi, 4).delta;
    ++rep.lemma24_checked;
    if (d4 > lemma24_bound(d2, 2.0) * (1.0 + 1e-12)) ++rep.lemma24_violations;
  }

  const int lemmaA1_trials = 5 * trials;
  for (int k = 0; k < lemmaA1_trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int l = rand_int(rng, 1, 12);
    const int s = rand_int(rng, 1, l);
    std::vector<double> a(static_cast<std::size_t>(l));
    for (auto& v : a) v = rng.uniform() < 0.2 ? 0.0 : -std::log(1.0 - rng.uniform());
    std::sort(a.begin(), a.end(), std::greater<>());
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < l; ++i) (i < s ? head : tail) += a[static_cast<std::size_t>(i)];
    double psi = std::max(tail - head, 0.0);
    if (rng.uniform() < 0.5) psi += rng.uniform(0.0, 2.0);
    const auto r = lemmaA1_check(a, s, rng.uniform(1.0, 3.0), psi);
    ++rep.lemmaA1_checked;
    if (r.verdict != CheckVerdict::kHolds) ++rep.lemmaA1_violations;
  }

  for (int k = 0; k < trials; ++k) {
    Rng rng(stream_seed(seed, stream++));
    const int l = rand_int(rng, 1, max_blocks);
    const int s = rand_int(rng, 1, l);
    const auto structure = random_structure(rng, l);
    BlockSignal x(structure, rng.normal_vector(structure.total_dim()));
    for (int i = 0; i < l; ++i) {
      if (rng.uniform() < 0.25) x.block(i).setZero();
    }
    const double alpha = 1.0;
    const double scale = std::max(mixed_norm_2_inf(x), mixed_norm_2_1(x) / s);
    if (scale > 0.0) x *= rng.uniform(0.5, 1.0) * alpha / scale;
    const auto dec = polytope_decompose(x, alpha, s);
    ++rep.polytope_checked;
    const bool count_ok = static_cast<int>(dec.terms.size()) <= 1 + mixed_norm_2_0(x);
    if (!check_decomposition(dec).ok() || !count_ok) ++rep.polytope_failures;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Trials

namespace {

struct CellKey {
  int rows;
  int s;
  double t;
  double rho;
};

std::vector<CellKey> enumerate_cells(const ExperimentGrid& g) {
  std::vector<CellKey> cells;
  for (int m : g.rows) {
    for (int s : g.sparsity) {
      for (double t : g.t) {
        for (double rho : g.rho) cells.push_back({m, s, t, rho});
      }
    }
  }
  return cells;
}

SensingMatrix draw_matrix(Ensemble ensemble, int rows, const BlockStructure& structure, std::uint64_t seed) {
  switch (ensemble) {
    case Ensemble::kGaussian: return gen_gaussian(rows, structure, seed);
    case Ensemble::kIdentity: return identity_matrix(structure);
    case Ensemble::kIncoherent: return gen_block_incoherent(rows, structure, seed);
  }
  throw ParameterError("unknown ensemble");
}

TrialRecord run_trial(const ExperimentSpec& spec, const CellKey& cell, std::uint64_t trial_id) {
  const auto start = std::chrono::steady_clock::now();
  const auto& g = spec.grid;
  const auto structure = BlockStructure::uniform(g.num_blocks, g.block_length);

  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed_stream = stream_seed(spec.seed, trial_id);
  rec.rows = cell.rows;
  rec.cols = structure.total_dim();
  rec.num_blocks = g.num_blocks;
  rec.block_length = g.block_length;
  rec.s = cell.s;
  rec.t = cell.t;
  rec.rho = cell.rho;

  Rng rng(rec.seed_stream);
  const auto phi = draw_matrix(g.ensemble, cell.rows, structure, rng.next());

  const auto order = check_condition(0.0, cell.t, cell.s).effective_order;
  if ((spec.compute_ric || spec.kind == ExperimentKind::kRicSweep) && order >= 1 &&
      order <= g.num_blocks && binomial(g.num_blocks, order) <= spec.ric_cap) {
    rec.delta = exact_block_ric(phi, order, RicOptions{spec.ric_cap, 1}).delta;
    rec.condition_ok = check_condition(*rec.delta, cell.t, cell.s).satisfied;
  }

  if (spec.kind != ExperimentKind::kRicSweep) {
    const auto support = random_support(rng, g.num_blocks, cell.s);
    const auto x = random_block_sparse(rng, structure, support);
    Vector b = apply(phi, x);
    if (cell.rho > 0.0) b += random_on_sphere(rng, cell.rows, cell.rho);

    auto result = cell.rho > 0.0 ? solve_noisy(phi, b, cell.rho, spec.solver)
                                 : solve_noiseless(phi, b, spec.solver);
    record_error(result, x);
    rec.converged = result.converged;
    rec.recovery_error = *result.error_vector_norm;
    const double norm = x.coeffs().norm();
    rec.success = *rec.recovery_error <= spec.success_tol * norm;

    if (rec.condition_ok) {
      const double tail = mixed_norm_2_1(best_block_approx(x, cell.s).tail);
      rec.bound_eq39 = error_bound_eq39(cell.t, cell.s, *rec.delta, cell.rho, tail).bound;
      rec.bound_eq40 = error_bound_eq40(cell.t, cell.s, *rec.delta, cell.rho, tail).bound;
    }
  }

  if (spec.record_timing) {
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  const auto& g = spec.grid;

  if (spec.kind == ExperimentKind::kCounterexample) {
    report.counterexample = demo_counterexample(g.t.front(), g.sparsity.front(), g.block_length,
                                                g.num_blocks, spec.solver);
    return report;
  }
  if (spec.kind == ExperimentKind::kIdentitySuite) {
    report.identities = run_identity_suite(spec.seed, g.trials, g.max_blocks);
    return report;
  }

  const auto cells = enumerate_cells(g);
  const auto per_cell = static_cast<std::size_t>(g.trials);
  report.records.resize(cells.size() * per_cell);
  parallel_for(report.records.size(), spec.threads, [&](std::size_t id) {
    report.records[id] = run_trial(spec, cells[id / per_cell], id);
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary sum{cells[c].rows, cells[c].s, cells[c].t, cells[c].rho};
    for (std::size_t k = 0; k < per_cell; ++k) {
      const auto& r = report.records[c * per_cell + k];
      ++sum.trials;
      sum.successes += r.success ? 1 : 0;
      sum.condition_ok += r.condition_ok ? 1 : 0;
      if (r.bound_eq39 && r.recovery_error) {
        sum.max_bound_violation = std::max(sum.max_bound_violation, *r.recovery_error - *r.bound_eq39);
      }
    }
    sum.success_rate = static_cast<double>(sum.successes) / sum.trials;
    report.max_bound_violation = std::max(report.max_bound_violation, sum.max_bound_violation);
    report.cells.push_back(sum);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reports

std::string counterexample_json(const CounterexampleReport& r) {
  return json{{"t", r.t},
              {"s", r.s},
              {"d", r.d},
              {"l", r.l},
              {"order", r.order},
              {"delta", r.delta},
              {"threshold", r.threshold},
              {"norm_x0", r.norm_x0},
              {"norm_x_hat", r.norm_x_hat},
              {"measurement_gap", r.measurement_gap},
              {"solver_objective", r.solver_objective},
              {"solver_converged", r.solver_converged},
              {"non_unique_minimizer", r.non_unique_minimizer}}
             .dump(2) + "\n";
}

std::string identity_suite_json(const IdentitySuiteReport& r) {
  return json{{"trials", r.trials},
              {"max_blocks", r.max_blocks},
              {"max_residual_eq11", r.max_residual_eq11},
              {"max_residual_eq12", r.max_residual_eq12},
              {"max_residual_eq13", r.max_residual_eq13},
              {"max_residual_eq14", r.max_residual_eq14},
              {"lemma24_checked", r.lemma24_checked},
              {"lemma24_violations", r.lemma24_violations},
              {"lemmaA1_checked", r.lemmaA1_checked},
              {"lemmaA1_violations", r.lemmaA1_violations},
              {"polytope_checked", r.polytope_checked},
              {"polytope_failures", r.polytope_failures}}
             .dump(2) + "\n";
}

std::string summary_json(const ExperimentReport& report) {
  const auto& spec = report.spec;
  const auto& g = spec.grid;
  json j{{"kind", to_string(spec.kind)},
         {"seed", spec.seed},
         {"success_tol", spec.success_tol},
         {"grid", json{{"m", g.rows},
                       {"num_blocks", g.num_blocks},
                       {"block_length", g.block_length},
                       {"s", g.sparsity},
                       {"t", g.t},
                       {"rho", g.rho},
                       {"trials", g.trials},
                       {"ensemble", to_string(g.ensemble)},
                       {"max_blocks", g.max_blocks}}},
         {"max_bound_violation", std::max(report.max_bound_violation, 0.0)}};
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back(json{{"m", c.rows},
                         {"s", c.s},
                         {"t", c.t},
                         {"rho", c.rho},
                         {"trials", c.trials},
                         {"successes", c.successes},
                         {"success_rate", c.success_rate},
                         {"condition_ok", c.condition_ok},
                         {"max_bound_violation", std::max(c.max_bound_violation, 0.0)}});
  }
  j["cells"] = cells;
  if (report.counterexample) j["counterexample"] = json::parse(counterexample_json(*report.counterexample));
  if (report.identities) j["identities"] = json::parse(identity_suite_json(*report.identities));
  return j.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const std::filesystem::path& stem) {
  io::write_text(stem.string() + ".json", summary_json(report));
  if (!report.records.empty()) {
    io::write_text(stem.string() + ".csv", format_trial_csv(report.records, report.spec.success_tol));
  }
}

}  // namespace blockcs
