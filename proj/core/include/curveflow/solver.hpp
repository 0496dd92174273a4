#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/scheme.hpp"

namespace curveflow {

/// 3x3 block of the per-node coupling; row-major.
using Block3 = std::array<double, 9>;

/// Block-cyclic-tridiagonal matrix with one 3x3 block per node pair:
/// diag[k] couples node k to itself, lower[k] to node k-1 (cyclic) and
/// upper[k] to node k+1 (cyclic). Unknowns per node: (dx, dy, dkappa);
/// equations per node: (speed equation, curvature equation x, y).
struct CyclicBlockTridiagonal {
  std::size_t n_nodes = 0;
  std::vector<Block3> diag, lower, upper;

  explicit CyclicBlockTridiagonal(std::size_t n)
      : n_nodes(n), diag(n, Block3{}), lower(n, Block3{}), upper(n, Block3{}) {}
  std::size_t dim() const { return 3 * n_nodes; }

  std::vector<std::vector<double>> dense() const;
  std::vector<double> apply(const std::vector<double>& z) const;
};

/// One linearized solve: local cyclic-banded coupling, a dense rank-one
/// correction u v^T from the lambda linearization, and the right-hand side.
struct AssembledSystem {
  CyclicBlockTridiagonal local_matrix;
  std::vector<double> rank_one_u;
  std::vector<double> rank_one_v;
  std::vector<double> rhs;

  explicit AssembledSystem(std::size_t n_nodes)
      : local_matrix(n_nodes),
        rank_one_u(3 * n_nodes, 0.0),
        rank_one_v(3 * n_nodes, 0.0),
        rhs(3 * n_nodes, 0.0) {}
};

enum class SolverMethod { Newton, Picard };

struct SolverConfig {
  SolverMethod method = SolverMethod::Newton;
  double tol = 1e-12;
  int max_iter = 50;
  /// Picard linearization coefficient: the scheme's printed form uses beta;
  /// set true to use alpha*beta instead.
  bool picard_alpha_beta = false;

  void validate() const;
};

/// Per-step diagnostics.
struct StepReport {
  int iterations = 0;
  double final_update_norm = 0.0;
  double lambda = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  double mesh_ratio = 0.0;
};

struct StepResult {
  PolygonalCurve curve;
  NodalField kappa;
  StepReport report;
};

/// Exact Gateaux derivative of residual() at (curve_iter, kappa_iter), with
/// rhs = -residual. The lambda coupling is carried as the rank-one term.
AssembledSystem assemble_newton(const PolygonalCurve& curve_iter,
                                const NodalField& kappa_iter,
                                const PolygonalCurve& curve_old,
                                const FlowParams& params);

/// Linear system of one lagged-coefficient iteration; the unknowns are the
/// full next iterate (positions and curvature), not an update.
AssembledSystem assemble_picard(const PolygonalCurve& curve_iter,
                                const NodalField& kappa_iter,
                                const PolygonalCurve& curve_old,
                                const FlowParams& params,
                                bool alpha_beta_variant = false);

/// Solves (local_matrix + u v^T) z = rhs: cyclic-banded LU plus the
/// Sherman-Morrison update, with a dense fallback for dim <= 384 or on
/// factorization breakdown. Throws SingularSystem.
std::vector<double> solve_system(const AssembledSystem& sys);

/// One backward-Euler step solved by undamped Newton iteration with the
/// max-node update stopping rule.
StepResult newton_advance(const PolygonalCurve& curve_old,
                          const NodalField& kappa_old,
                          const FlowParams& params, const SolverConfig& config);

/// One step solved by Picard (lagged normal / lagged power) iteration.
StepResult picard_advance(const PolygonalCurve& curve_old,
                          const NodalField& kappa_old,
                          const FlowParams& params, const SolverConfig& config);

/// Dispatches on config.method.
StepResult advance(const PolygonalCurve& curve_old, const NodalField& kappa_old,
                   const FlowParams& params, const SolverConfig& config);

}  // namespace curveflow
