#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curveflow/harness.hpp"

namespace curveflow::cli {

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// Diagnostics CSV with the fixed header
/// t,area,rel_area_loss,perimeter,norm_perimeter,mesh_ratio,lambda,iterations.
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

/// One JSON object per line: {"t": ..., "nodes": [[x, y], ...]}.
std::string snapshots_jsonl(const std::vector<Snapshot>& snapshots);

/// Convergence table CSV: h,t,error,order (order empty on the coarsest level).
std::string convergence_csv(const std::vector<ConvergenceEntry>& table);

nlohmann::json sweep_report_json(const std::vector<SweepReport>& reports);

}  // namespace curveflow::cli
