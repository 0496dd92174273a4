#include "curveflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "curveflow/errors.hpp"

namespace curveflow {

namespace {

// Step index of a measurement time; throws unless t is an integer multiple
// of tau to 1e-12 relative.
long long step_index_of(double t, double tau) {
  const long long idx = std::llround(t / tau);
  if (std::abs(static_cast<double>(idx) * tau - t) > 1e-12 * std::max(1.0, t)) {
    throw CheckpointMisaligned("time " + std::to_string(t) +
                               " is not a multiple of tau = " +
                               std::to_string(tau));
  }
  return idx;
}

DiagnosticsRow make_row(double t, const PolygonalCurve& curve, double lambda,
                        int iterations, double a0, double l0) {
  DiagnosticsRow row;
  row.t = t;
  row.area = area(curve);
  row.rel_area_loss = (row.area - a0) / a0;
  row.perimeter = perimeter(curve);
  row.norm_perimeter = row.perimeter / l0;
  row.mesh_ratio = mesh_ratio(curve);
  row.lambda = lambda;
  row.iterations = iterations;
  return row;
}

}  // namespace

EvolveResult evolve(const RunSpec& spec) {
  spec.params.validate();
  spec.solver.validate();
  if (spec.t_max < 0.0) throw InvalidSpec("t_max must be nonnegative");

  const double tau = spec.params.tau;
  const long long n_steps = spec.t_max > 0.0 ? step_index_of(spec.t_max, tau) : 0;
  std::set<long long> snap_steps{0, n_steps};
  for (double t : spec.checkpoints) {
    const long long idx = step_index_of(t, tau);
    if (idx >= 0 && idx <= n_steps) snap_steps.insert(idx);
  }

  EvolveResult result;
  PolygonalCurve curve = generate(spec.shape);
  NodalField kappa = project_curvature(curve);
  const double a0 = area(curve);
  const double l0 = perimeter(curve);

  result.rows.push_back(make_row(0.0, curve, 0.0, 0, a0, l0));
  if (snap_steps.count(0)) result.snapshots.push_back({0.0, curve, kappa});

  for (long long m = 0; m < n_steps; ++m) {
    try {
      StepResult step = advance(curve, kappa, spec.params, spec.solver);
      curve = std::move(step.curve);
      kappa = std::move(step.kappa);
      const double t = static_cast<double>(m + 1) * tau;
      result.rows.push_back(make_row(t, curve, step.report.lambda,
                                     step.report.iterations, a0, l0));
      if (snap_steps.count(m + 1)) result.snapshots.push_back({t, curve, kappa});
      result.steps_completed = static_cast<std::size_t>(m + 1);
    } catch (const CurveFlowError& e) {
      result.aborted = true;
      result.abort_reason = "step " + std::to_string(m + 1) + " (t = " +
                            std::to_string(static_cast<double>(m + 1) * tau) +
                            "): " + e.what();
      return result;
    }
  }
  return result;
}

std::vector<ConvergenceEntry> convergence_study(const ExperimentPlan& plan) {
  if (plan.h_levels.empty() || plan.t_checkpoints.empty()) {
    throw InvalidSpec("convergence_study: empty plan");
  }
  for (double h : plan.h_levels) {
    if (h < plan.h_ref) {
      throw InvalidSpec("reference resolution must be finer than every level");
    }
  }

  auto run_level = [&](double h, double tau) {
    RunSpec run;
    run.shape = plan.shape;
    run.shape.n_nodes = static_cast<std::size_t>(std::llround(1.0 / h));
    run.params = plan.params;
    run.params.tau = tau;
    run.solver = plan.solver;
    run.t_max = *std::max_element(plan.t_checkpoints.begin(),
                                  plan.t_checkpoints.end());
    run.checkpoints = plan.t_checkpoints;
    EvolveResult res = evolve(run);
    if (res.aborted) {
      throw MaxIterExceeded("convergence run aborted: " + res.abort_reason);
    }
    return res;
  };

  auto state_at = [](const EvolveResult& res, double t) -> const PolygonalCurve& {
    for (const Snapshot& s : res.snapshots) {
      if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, t)) return s.curve;
    }
    throw CheckpointMisaligned("no snapshot at t = " + std::to_string(t));
  };

  // The reference run is computed once and shared across levels.
  const EvolveResult reference = run_level(plan.h_ref, plan.tau_ref);

  std::vector<double> levels = plan.h_levels;
  std::sort(levels.begin(), levels.end(), std::greater<>());  // coarse first

  std::vector<ConvergenceEntry> table;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double h = levels[i];
    const EvolveResult res = run_level(h, plan.tau_coefficient * h * h);
    for (double t : plan.t_checkpoints) {
      ConvergenceEntry entry{h, t,
                             manifold_distance(state_at(res, t),
                                               state_at(reference, t)),
                             std::nullopt};
      if (i > 0) {
        // Order against the previous (coarser) level at the same time.
        for (const ConvergenceEntry& prev : table) {
          if (prev.h == levels[i - 1] && prev.t == t && prev.error > 0.0 &&
              entry.error > 0.0) {
            entry.order = std::log(prev.error / entry.error) /
                          std::log(levels[i - 1] / h);
          }
        }
      }
      table.push_back(entry);
    }
  }
  return table;
}

std::vector<SweepReport> structure_sweep(const ShapeSpec& shape,
                                         const std::vector<SweepRegime>& regimes,
                                         const SolverConfig& solver) {
  std::vector<SweepReport> reports;
  for (const SweepRegime& regime : regimes) {
    SweepReport report;
    report.regime = regime;
    RunSpec run;
    run.shape = shape;
    run.params.alpha = regime.alpha;
    run.params.beta = regime.beta;
    run.params.tau = regime.tau;
    run.solver = solver;
    run.t_max = regime.t_max;
    try {
      const EvolveResult res = evolve(run);
      if (res.aborted) {
        report.error = res.abort_reason;
      } else {
        report.completed = true;
      }
      for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const DiagnosticsRow& row = res.rows[i];
        report.max_rel_area_loss =
            std::max(report.max_rel_area_loss, std::abs(row.rel_area_loss));
        report.max_iterations = std::max(report.max_iterations, row.iterations);
        if (i > 0 &&
            row.perimeter > res.rows[i - 1].perimeter * (1.0 + 1e-12)) {
          ++report.perimeter_violations;
        }
        report.final_mesh_ratio = row.mesh_ratio;
      }
    } catch (const CurveFlowError& e) {
      report.error = e.what();
    }
    reports.push_back(report);
  }
  return reports;
}

}  // namespace curveflow
