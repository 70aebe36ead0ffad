#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "blockcs/block_model.hpp"
#include "blockcs/oracle.hpp"
#include "blockcs/recovery_solver.hpp"
#include "blockcs/rip_analysis.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs::io {

// File schemas:
//   structure: {"blocks": [d_1, ..., d_l]}
//   signal:    {"structure": {...}, "coeffs": [...]}
//   matrix:    {"m": M, "n": N, "structure": {...}, "data": [row-major]}
//   vector:    [v_1, ...] or {"values": [...]}; CSV with one value per line
//              or a single comma-separated row is also accepted.
// Malformed content raises IoError.

/// 17 significant digits ("%.17g"), enough to round-trip any double.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

std::string to_json(const BlockStructure& structure);
std::string to_json(const BlockSignal& signal);
std::string to_json(const SensingMatrix& matrix);
std::string vector_to_json(const Vector& v);

BlockStructure structure_from_json(std::string_view text);
BlockSignal signal_from_json(std::string_view text);
SensingMatrix matrix_from_json(std::string_view text);
Vector vector_from_text(std::string_view text);

/// Rows of comma-separated floats; the column count must match the structure.
SensingMatrix matrix_from_csv(std::string_view text, const BlockStructure& structure);

/// Loads a matrix file. ".csv" files need a structure sidecar: `structure_path`
/// when given, otherwise "<path>.structure.json".
SensingMatrix load_matrix(const std::filesystem::path& path,
                          const std::optional<std::filesystem::path>& structure_path = {});
Vector load_vector(const std::filesystem::path& path);
BlockSignal load_signal(const std::filesystem::path& path);

std::string ric_report_json(const RicCertificate& cert, double wall_seconds);
std::string recovery_result_json(const RecoveryResult& result);
std::string oracle_solution_json(const OracleSolution& solution);
std::string bound_report_json(const BoundReport& report);
std::string condition_report_json(const ConditionReport& report);

}  // namespace blockcs::io
