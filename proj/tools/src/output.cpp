#include "output.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curveflow/errors.hpp"

namespace curveflow::cli {

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CurveFlowError("cannot write " + tmp.string());
    out << content;
    if (!out) throw CurveFlowError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

// shortest representation that round-trips
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  std::ostringstream out;
  out << "t,area,rel_area_loss,perimeter,norm_perimeter,mesh_ratio,lambda,"
         "iterations\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.area) << ',' << fmt(r.rel_area_loss) << ','
        << fmt(r.perimeter) << ',' << fmt(r.norm_perimeter) << ','
        << fmt(r.mesh_ratio) << ',' << fmt(r.lambda) << ',' << r.iterations
        << '\n';
  }
  return out.str();
}

std::string snapshots_jsonl(const std::vector<Snapshot>& snapshots) {
  std::ostringstream out;
  for (const auto& s : snapshots) {
    nlohmann::json line;
    line["t"] = s.t;
    auto nodes = nlohmann::json::array();
    for (const auto& p : s.curve.nodes()) {
      nodes.push_back({p.x, p.y});
    }
    line["nodes"] = std::move(nodes);
    out << line.dump() << '\n';
  }
  return out.str();
}

std::string convergence_csv(const std::vector<ConvergenceEntry>& table) {
  std::ostringstream out;
  out << "h,t,error,order\n";
  for (const auto& e : table) {
    out << fmt(e.h) << ',' << fmt(e.t) << ',' << fmt(e.error) << ',';
    if (e.order) out << fmt(*e.order);
    out << '\n';
  }
  return out.str();
}

nlohmann::json sweep_report_json(const std::vector<SweepReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["alpha"] = r.regime.alpha;
    j["beta"] = r.regime.beta;
    j["tau"] = r.regime.tau;
    j["tmax"] = r.regime.t_max;
    j["max_rel_area_loss"] = r.max_rel_area_loss;
    j["perimeter_violations"] = r.perimeter_violations;
    j["final_mesh_ratio"] = r.final_mesh_ratio;
    j["max_iterations"] = r.max_iterations;
    j["completed"] = r.completed;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace curveflow::cli
