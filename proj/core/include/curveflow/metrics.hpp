#pragma once

#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Quantitative diagnostics of one stored state.
struct DiagnosticsRow {
  double t = 0.0;
  double area = 0.0;
  double rel_area_loss = 0.0;   // (A^m - A^0) / A^0
  double perimeter = 0.0;
  double norm_perimeter = 1.0;  // L^m / L^0
  double mesh_ratio = 1.0;
  double lambda = 0.0;
  int iterations = 0;
};

struct TimedState {
  double t;
  PolygonalCurve curve;
  double lambda = 0.0;
  int iterations = 0;
};

/// One row per state; area loss and normalized perimeter are referenced to
/// the first entry.
std::vector<DiagnosticsRow> diagnostics(const std::vector<TimedState>& history);

/// True when no two non-adjacent edges of the polygon intersect or touch.
bool is_simple_polygon(const PolygonalCurve& curve);

struct ManifoldDistanceResult {
  double value = 0.0;
  /// Set when a boundary degeneracy forced the sampled grid estimator.
  bool rasterized = false;
};

/// Area of the symmetric difference of the enclosed regions:
/// M = |Omega1| + |Omega2| - 2 |Omega1 ^ Omega2|, with the intersection area
/// computed by an exact (floating-precision) polygon boolean. Coincident
/// vertices or collinear overlapping edges trigger the grid estimator and
/// flag the result. Throws SelfIntersecting when an input is not simple.
ManifoldDistanceResult manifold_distance_detailed(const PolygonalCurve& c1,
                                                  const PolygonalCurve& c2);
double manifold_distance(const PolygonalCurve& c1, const PolygonalCurve& c2);

/// Sampled symmetric-difference estimator: even-odd insideness on a
/// grid x grid lattice of cell midpoints over the joint bounding box.
double rasterized_symmetric_difference(const PolygonalCurve& c1,
                                       const PolygonalCurve& c2,
                                       int grid = 4096);

}  // namespace curveflow
