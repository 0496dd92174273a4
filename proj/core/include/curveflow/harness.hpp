#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metrics.hpp"
#include "curveflow/scheme.hpp"
#include "curveflow/shapes.hpp"
#include "curveflow/solver.hpp"

namespace curveflow {

/// One time-evolution run: shape, flow parameters, duration and snapshot
/// times. Checkpoints must be integer multiples of tau (1e-12 relative).
struct RunSpec {
  ShapeSpec shape;
  FlowParams params;
  SolverConfig solver;
  double t_max = 2.0;
  std::vector<double> checkpoints;  // snapshot times; t=0 and t_max are
                                    // always stored
};

struct Snapshot {
  double t;
  PolygonalCurve curve;
  NodalField kappa;
};

struct EvolveResult {
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRow> rows;  // one per step, plus the initial state
  bool aborted = false;
  std::string abort_reason;
  std::size_t steps_completed = 0;
};

/// Steps the scheme from t = 0 to t_max, storing snapshots at the requested
/// times and diagnostics at every step. Solver errors abort cleanly with the
/// partial history preserved and the step/time recorded in abort_reason.
EvolveResult evolve(const RunSpec& spec);

/// Convergence study against a fine reference run.
struct ExperimentPlan {
  ShapeSpec shape;                     // n_nodes ignored; set per level
  FlowParams params;                   // tau ignored; set per level
  SolverConfig solver;
  std::vector<double> h_levels;        // mesh sizes; N = 1/h
  double tau_coefficient = 1.0;        // tau = c * h^2
  std::vector<double> t_checkpoints{0.25, 0.5, 1.0, 2.0};
  double h_ref = 1.0 / 256.0;          // reference resolution
  double tau_ref = 1.0 / 65536.0;
};

struct ConvergenceEntry {
  double h;
  double t;
  double error;                   // e^h(t) = M(coarse, reference)
  std::optional<double> order;    // log2(e^h / e^{h/2}) vs the previous level
};

std::vector<ConvergenceEntry> convergence_study(const ExperimentPlan& plan);

/// Structure-preservation sweep over (alpha, beta) regimes and time steps.
struct SweepRegime {
  double alpha;
  double beta;
  double tau;
  double t_max;
};

struct SweepReport {
  SweepRegime regime;
  double max_rel_area_loss = 0.0;        // max_m |A^m - A^0| / A^0
  int perimeter_violations = 0;          // steps with L^{m+1} > L^m (1+1e-12)
  double final_mesh_ratio = 0.0;
  int max_iterations = 0;
  bool completed = false;
  std::string error;
};

std::vector<SweepReport> structure_sweep(const ShapeSpec& shape,
                                         const std::vector<SweepRegime>& regimes,
                                         const SolverConfig& solver);

}  // namespace curveflow
