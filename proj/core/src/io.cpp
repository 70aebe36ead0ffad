#include "blockcs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "blockcs/error.hpp"
#include "json.hpp"

namespace blockcs::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json structure_json(const BlockStructure& s) { return json{{"blocks", s.lengths()}}; }

BlockStructure structure_of(const json& j) {
  try {
    return BlockStructure(j.at("blocks").get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw IoError(std::string("structure: ") + e.what());
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_json(const BlockStructure& structure) { return dump(structure_json(structure)); }

std::string to_json(const BlockSignal& signal) {
  return dump(json{{"structure", structure_json(signal.structure())}, {"coeffs", to_std(signal.coeffs())}});
}

std::string to_json(const SensingMatrix& matrix) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(matrix.rows() * matrix.cols()));
  for (int r = 0; r < matrix.rows(); ++r) {
    for (int c = 0; c < matrix.cols(); ++c) data.push_back(matrix.entries()(r, c));
  }
  return dump(json{{"m", matrix.rows()},
                   {"n", matrix.cols()},
                   {"structure", structure_json(matrix.structure())},
                   {"data", data}});
}

std::string vector_to_json(const Vector& v) { return dump(json(to_std(v))); }

BlockStructure structure_from_json(std::string_view text) {
  const json j = parse(text);
  return structure_of(j.contains("structure") ? j.at("structure") : j);
}

BlockSignal signal_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    return BlockSignal(structure_of(j.at("structure")), from_std(j.at("coeffs").get<std::vector<double>>()));
  } catch (const json::exception& e) {
    throw IoError(std::string("signal: ") + e.what());
  } catch (const ParameterError& e) {
    throw IoError(std::string("signal: ") + e.what());
  }
}

SensingMatrix matrix_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (m < 1 || n < 1 || data.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n)) {
      throw IoError("matrix: data length does not equal m * n");
    }
    Matrix a(m, n);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = data[static_cast<std::size_t>(r * n + c)];
    }
    return SensingMatrix(std::move(a), structure_of(j.at("structure")));
  } catch (const json::exception& e) {
    throw IoError(std::string("matrix: ") + e.what());
  } catch (const ParameterError& e) {
    throw IoError(std::string("matrix: ") + e.what());
  }
}

namespace {

std::vector<double> parse_csv_row(std::string_view line) {
  std::vector<double> row;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto end = std::min(line.find(',', start), line.size());
    std::string cell(line.substr(start, end - start));
    std::size_t used = 0;
    try {
      row.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw IoError("CSV: cannot parse number '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw IoError("CSV: trailing characters in '" + cell + "'");
    }
    start = end + 1;
  }
  return row;
}

std::vector<std::vector<double>> parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) rows.push_back(parse_csv_row(line));
    start = end + 1;
  }
  return rows;
}

}  // namespace

Vector vector_from_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw IoError("vector: empty input");
  if (text[first] == '[' || text[first] == '{') {
    const json j = parse(text);
    try {
      return from_std((j.is_object() ? j.at("values") : j).get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw IoError(std::string("vector: ") + e.what());
    }
  }
  const auto rows = parse_csv(text);
  std::vector<double> flat;
  if (rows.size() == 1) {
    flat = rows.front();
  } else {
    for (const auto& r : rows) {
      if (r.size() != 1) throw IoError("vector CSV: expected one value per line or a single row");
      flat.push_back(r.front());
    }
  }
  return from_std(flat);
}

SensingMatrix matrix_from_csv(std::string_view text, const BlockStructure& structure) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw IoError("matrix CSV: no rows");
  Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw IoError("matrix CSV: ragged rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  try {
    return SensingMatrix(std::move(a), structure);
  } catch (const ParameterError& e) {
    throw IoError(std::string("matrix CSV: ") + e.what());
  }
}

SensingMatrix load_matrix(const std::filesystem::path& path,
                          const std::optional<std::filesystem::path>& structure_path) {
  if (path.extension() == ".csv") {
    const auto sidecar = structure_path.value_or(std::filesystem::path(path.string() + ".structure.json"));
    return matrix_from_csv(read_text(path), structure_from_json(read_text(sidecar)));
  }
  return matrix_from_json(read_text(path));
}

Vector load_vector(const std::filesystem::path& path) { return vector_from_text(read_text(path)); }

BlockSignal load_signal(const std::filesystem::path& path) { return signal_from_json(read_text(path)); }

std::string ric_report_json(const RicCertificate& cert, double wall_seconds) {
  return dump(json{{"order_s", cert.order_s},
                   {"delta", cert.delta},
                   {"worst_support", cert.worst_support},
                   {"min_eig", cert.min_eig},
                   {"max_eig", cert.max_eig},
                   {"supports_enumerated", cert.supports_enumerated},
                   {"wall_time", wall_seconds}});
}

std::string recovery_result_json(const RecoveryResult& r) {
  return dump(json{{"estimate", json{{"structure", structure_json(r.estimate.structure())},
                                     {"coeffs", to_std(r.estimate.coeffs())}}},
                   {"objective", r.objective},
                   {"feasibility_gap", r.feasibility_gap},
                   {"iterations", r.iterations},
                   {"primal_residual", r.primal_residual},
                   {"dual_residual", r.dual_residual},
                   {"converged", r.converged},
                   {"status", to_string(r.status)},
                   {"final_penalty", r.final_penalty},
                   {"range_distance", r.range_distance},
                   {"error_vector_norm", nullable(r.error_vector_norm)}});
}

std::string oracle_solution_json(const OracleSolution& s) {
  return dump(json{{"found", s.found},
                   {"estimate", json{{"structure", structure_json(s.estimate.structure())},
                                     {"coeffs", to_std(s.estimate.coeffs())}}},
                   {"support", s.support},
                   {"sparsity", s.sparsity},
                   {"residual", s.residual},
                   {"supports_searched", s.supports_searched}});
}

std::string bound_report_json(const BoundReport& r) {
  return dump(json{{"formula", to_string(r.formula)},
                   {"t", r.t},
                   {"s", r.s},
                   {"delta", r.delta},
                   {"rho", r.rho},
                   {"tail_norm", r.tail_norm},
                   {"t_tilde", r.t_tilde},
                   {"denom", r.denom},
                   {"noise_coeff", r.noise_coeff},
                   {"tail_coeff", r.tail_coeff},
                   {"bound", r.bound}});
}

std::string condition_report_json(const ConditionReport& r) {
  return dump(json{{"satisfied", r.satisfied},
                   {"reason", to_string(r.reason)},
                   {"threshold", r.threshold},
                   {"order_is_integer", r.order_is_integer},
                   {"effective_order", r.effective_order}});
}

}  // namespace blockcs::io
