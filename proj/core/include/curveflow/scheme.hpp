#pragma once

#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// One scalar per node, periodic (value at rho_N == value at rho_0).
using NodalField = std::vector<double>;

/// Which positivity assumption on the nodal curvature is enforced.
/// Automatic derives the requirement from alpha: none for alpha = 1,
/// kappa >= 0 for 0 < alpha != 1, kappa > 0 for alpha < 0.
enum class CurvatureSign { Automatic, None, NonNegative, Positive };

struct FlowParams {
  double alpha = 1.0;
  double beta = -1.0;
  double tau = 1e-3;
  CurvatureSign curvature_sign_mode = CurvatureSign::Automatic;

  /// Throws InvalidSpec unless alpha*beta < 0 and tau > 0.
  void validate() const;
};

/// Nonlinear residual of the fully discrete scheme, tested with nodal hats.
struct Residual {
  std::vector<double> scalar_block;  // velocity/curvature-speed equation
  std::vector<Vec2> vector_block;    // curvature definition equation
};

/// A scalar or vector field on the periodic interval with well-defined
/// one-sided limits at the nodes: either nodal piecewise-linear (continuous,
/// one value per node) or constant on each segment (one value per segment).
template <typename T>
struct PiecewiseField {
  enum class Kind { Nodal, PerSegment };
  Kind kind;
  std::vector<T> values;

  static PiecewiseField nodal(std::vector<T> v) {
    return {Kind::Nodal, std::move(v)};
  }
  static PiecewiseField per_segment(std::vector<T> v) {
    return {Kind::PerSegment, std::move(v)};
  }

  // One-sided limit inside segment s (0-based), at node j.
  const T& limit(std::size_t node, std::size_t seg) const {
    return kind == Kind::Nodal ? values[node] : values[seg];
  }
};

/// Mass-lumped inner product over the given curve:
///   (u,v)^h = 1/2 sum_j |h_j| [ (u.v)(rho_j^-) + (u.v)(rho_{j-1}^+) ].
/// Both one-sided limits at the ends of segment j take the segment-j value
/// for per-segment fields and the nodal value for nodal fields.
double mass_lumped_inner(const PiecewiseField<double>& u,
                         const PiecewiseField<double>& v,
                         const PolygonalCurve& curve);
double mass_lumped_inner(const PiecewiseField<Vec2>& u,
                         const PiecewiseField<Vec2>& v,
                         const PolygonalCurve& curve);

/// Discrete arc-length derivative with respect to the reference curve:
/// on segment j returns (f_j - f_{j-1}) / |h_j^ref|.
std::vector<double> arc_derivative(const NodalField& field,
                                   const PolygonalCurve& reference);
std::vector<Vec2> arc_derivative(const std::vector<Vec2>& field,
                                 const PolygonalCurve& reference);

/// Half-step normal per segment: -(h_j^old + h_j^new)^perp / (2 |h_j^old|).
/// Not generally of unit length.
std::vector<Vec2> half_step_normal(const PolygonalCurve& curve_old,
                                   const PolygonalCurve& curve_new);

/// kappa^alpha with the scheme's conventions: alpha = 1 is the identity,
/// 0^alpha = 0 for alpha > 0, and fractional powers require kappa > 0.
/// Throws CurvatureSignViolation when the sign assumption fails.
double kappa_pow(double kappa, double alpha);

/// Checks the positivity assumption on every nodal value; throws
/// CurvatureSignViolation on failure.
void check_curvature_sign(const NodalField& kappa, const FlowParams& params);

/// Discrete multiplier lambda = (beta kappa^alpha, 1)^h / (1,1)^h.
double lambda_discrete(const NodalField& kappa, const PolygonalCurve& curve,
                       const FlowParams& params);

/// Residual of the two weak equations at (curve_new, kappa_new), with all
/// inner products mass-lumped over curve_old. A root is a scheme solution.
Residual residual(const PolygonalCurve& curve_new, const NodalField& kappa_new,
                  const PolygonalCurve& curve_old, const FlowParams& params);

/// Nodal curvature of a curve from the mass-lumped curvature identity with
/// the curve's own segment normals: kappa_j = (N_j . T_j) / (N_j . N_j)
/// where N_j is the length-weighted adjacent-normal average and T_j the
/// tangent difference. Supplies kappa^0 at t = 0.
NodalField project_curvature(const PolygonalCurve& curve);

/// Weighted power mean ( sum w_i x_i^p / sum w_i )^(1/p).
double weighted_power_mean(const std::vector<double>& weights,
                           const std::vector<double>& values, double p);

/// Discrete power mean inequality predicate: p-mean <= q-mean for p < q,
/// up to relative slack for roundoff.
bool power_mean_inequality_holds(const std::vector<double>& weights,
                                 const std::vector<double>& values, double p,
                                 double q, double rel_tol = 1e-12);

}  // namespace curveflow
