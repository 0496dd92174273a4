#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "curveflow/errors.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace curveflow::cli {

namespace {

struct Failure {
  int code;
  std::string category;
  std::string message;
};

Failure classify(const std::exception& e) {
  if (dynamic_cast<const InvalidSpec*>(&e) ||
      dynamic_cast<const CheckpointMisaligned*>(&e)) {
    return {kExitConfig, "config", e.what()};
  }
  if (dynamic_cast<const SelfIntersecting*>(&e)) {
    return {kExitMetric, "metric", e.what()};
  }
  return {kExitSolver, "solver", e.what()};
}

int report_failure(const RunConfig& config, const Failure& f) {
  nlohmann::json j;
  j["error"] = f.message;
  j["category"] = f.category;
  try {
    write_file_atomic(config.out_dir + "/error.json", j.dump(2) + "\n");
  } catch (const std::exception&) {
    // out dir unusable; stderr still carries the message
  }
  std::cerr << "error (" << f.category << "): " << f.message << "\n";
  return f.code;
}

void clear_stale_error(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::remove(config.out_dir + "/error.json", ec);
}

/// Requested snapshot times snapped to the nearest step multiple, deduped,
/// restricted to (0, t_max). t=0 and t_max are stored unconditionally.
std::vector<double> snapped_checkpoints(const std::vector<double>& requested,
                                        double tau, double t_max) {
  std::vector<double> out;
  for (double t : requested) {
    const double snapped = std::round(t / tau) * tau;
    if (snapped <= 0.5 * tau || snapped >= t_max - 0.5 * tau) continue;
    if (out.empty() || std::abs(out.back() - snapped) > 0.5 * tau) {
      out.push_back(snapped);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["shape"] = c.shape;
  j["N"] = c.n_nodes;
  j["alpha"] = c.alpha_label;
  j["beta"] = c.beta_label;
  j["tau"] = c.effective_tau();
  j["tmax"] = c.t_max;
  j["solver"] = c.solver;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["quick"] = c.quick;
  return j;
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%03zu.svg", i);
  return buf;
}

void write_render(const RunConfig& config,
                  const std::vector<Snapshot>& snapshots) {
  const auto frames = frame_svgs(snapshots, config.render_options);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_file_atomic(config.out_dir + "/" + frame_name(i), frames[i]);
  }
  write_file_atomic(config.out_dir + "/overlay.svg",
                    snapshots_svg(snapshots, config.render_options));
}

double default_sweep_tmax(double alpha, double beta, double fallback) {
  struct Entry {
    double alpha, beta, t_max;
  };
  static const Entry table[] = {
      {1.0, -1.0, 2.0},       {2.0, -1.0, 2.0}, {1.0 / 3.0, -1.0, 2.0},
      {-1.0, 1.0, 0.5},       {-2.0, 1.0, 0.2}, {-1.0 / 3.0, 1.0, 2.0},
  };
  for (const auto& e : table) {
    if (std::abs(e.alpha - alpha) < 1e-12 && std::abs(e.beta - beta) < 1e-12) {
      return e.t_max;
    }
  }
  return fallback;
}

}  // namespace

int cmd_evolve(const RunConfig& config) {
  try {
    RunSpec spec;
    spec.shape = config.shape_spec();
    spec.params = config.flow_params();
    spec.solver = config.solver_config();
    // final time snapped to a whole number of steps, like the checkpoints
    spec.t_max = std::max(spec.params.tau,
                          std::round(config.t_max / spec.params.tau) *
                              spec.params.tau);
    spec.checkpoints = snapped_checkpoints(config.checkpoints,
                                           spec.params.tau, spec.t_max);

    const EvolveResult result = evolve(spec);

    write_file_atomic(config.out_dir + "/diagnostics.csv",
                      diagnostics_csv(result.rows));
    write_file_atomic(config.out_dir + "/snapshots.jsonl",
                      snapshots_jsonl(result.snapshots));
    nlohmann::json summary = config_echo(config);
    summary["checkpoints"] = spec.checkpoints;
    summary["steps_completed"] = result.steps_completed;
    summary["aborted"] = result.aborted;
    if (result.aborted) summary["abort_reason"] = result.abort_reason;
    if (!result.rows.empty()) {
      summary["final_area"] = result.rows.back().area;
      summary["final_perimeter"] = result.rows.back().perimeter;
    }
    write_file_atomic(config.out_dir + "/summary.json", summary.dump(2) + "\n");

    if (config.render) write_render(config, result.snapshots);

    if (result.aborted) {
      return report_failure(config,
                            {kExitSolver, "solver", result.abort_reason});
    }
    clear_stale_error(config);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure(config, classify(e));
  }
}

int cmd_converge(const RunConfig& config) {
  try {
    ExperimentPlan plan;
    plan.shape = config.shape_spec();
    plan.params = config.flow_params();
    plan.solver = config.solver_config();
    plan.h_levels = config.h_levels;
    plan.tau_coefficient = config.tau_rule_coefficient;
    if (!config.checkpoints.empty()) plan.t_checkpoints = config.checkpoints;
    plan.h_ref = config.h_ref.value_or(config.quick ? 1.0 / 128.0
                                                    : 1.0 / 256.0);
    plan.tau_ref = config.tau_ref.value_or(config.quick ? 1.0 / 16384.0
                                                        : 1.0 / 65536.0);

    const auto table = convergence_study(plan);

    write_file_atomic(config.out_dir + "/convergence.csv",
                      convergence_csv(table));
    write_file_atomic(config.out_dir + "/convergence.svg",
                      convergence_svg(table, config.render_options));
    nlohmann::json summary = config_echo(config);
    summary["h_levels"] = plan.h_levels;
    summary["t_checkpoints"] = plan.t_checkpoints;
    summary["h_ref"] = plan.h_ref;
    summary["tau_ref"] = plan.tau_ref;
    write_file_atomic(config.out_dir + "/summary.json", summary.dump(2) + "\n");
    clear_stale_error(config);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure(config, classify(e));
  }
}

int cmd_sweep(const RunConfig& config) {
  try {
    std::vector<std::pair<std::string, std::string>> labels =
        config.sweep_regimes;
    if (labels.empty()) {
      labels = {{"1", "-1"},  {"2", "-1"}, {"1/3", "-1"},
                {"-1", "1"}, {"-2", "1"}, {"-1/3", "1"}};
    }
    const double h = config.sweep_h;
    std::vector<SweepRegime> regimes;
    for (const auto& [alpha_s, beta_s] : labels) {
      const double alpha = parse_rational(alpha_s);
      const double beta = parse_rational(beta_s);
      if (alpha * beta >= 0.0) {
        throw InvalidSpec("regime (" + alpha_s + ", " + beta_s +
                          ") violates alpha*beta < 0");
      }
      for (double factor : config.sweep_tau_factors) {
        SweepRegime r;
        r.alpha = alpha;
        r.beta = beta;
        r.tau = factor * h * h;
        r.t_max = default_sweep_tmax(alpha, beta, config.t_max);
        regimes.push_back(r);
      }
    }

    ShapeSpec shape = config.shape_spec();
    shape.n_nodes = static_cast<std::size_t>(std::lround(1.0 / h));
    const SolverConfig solver = config.solver_config();

    std::vector<SweepReport> reports(regimes.size());
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || regimes.size() <= 1) {
      reports = structure_sweep(shape, regimes, solver);
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < regimes.size();
             i = next.fetch_add(1)) {
          reports[i] = structure_sweep(shape, {regimes[i]}, solver).front();
        }
      };
      std::vector<std::thread> pool;
      const int n_threads = static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(jobs), regimes.size()));
      for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    nlohmann::json arr = sweep_report_json(reports);
    bool all_pass = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const bool pass = reports[i].completed &&
                        reports[i].max_rel_area_loss <= 1e-10 &&
                        reports[i].perimeter_violations == 0;
      arr[i]["pass"] = pass;
      all_pass = all_pass && pass;
    }
    nlohmann::json doc;
    doc["shape"] = config.shape;
    doc["h"] = h;
    doc["solver"] = config.solver;
    doc["regimes"] = std::move(arr);
    doc["all_pass"] = all_pass;
    write_file_atomic(config.out_dir + "/sweep.json", doc.dump(2) + "\n");
    if (all_pass) clear_stale_error(config);
    return all_pass ? kExitOk : kExitSolver;
  } catch (const std::exception& e) {
    return report_failure(config, classify(e));
  }
}

int cmd_render(const RunConfig& config) {
  try {
    const std::string path = config.out_dir + "/snapshots.jsonl";
    std::ifstream in(path);
    if (!in) throw InvalidSpec("no snapshot file at " + path);
    std::vector<Snapshot> snapshots;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("bad snapshot line: ") + e.what());
      }
      std::vector<Vec2> nodes;
      for (const auto& p : j.at("nodes")) {
        nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
      snapshots.push_back({j.at("t").get<double>(), PolygonalCurve(nodes),
                           NodalField(nodes.size(), 0.0)});
    }
    if (snapshots.empty()) throw InvalidSpec("snapshot file is empty");
    write_render(config, snapshots);
    clear_stale_error(config);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_failure(config, classify(e));
  }
}

}  // namespace curveflow::cli
