#include "curveflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "curveflow/errors.hpp"

namespace curveflow {

std::vector<DiagnosticsRow> diagnostics(const std::vector<TimedState>& history) {
  if (history.empty()) throw InvalidSpec("diagnostics: empty history");
  std::vector<DiagnosticsRow> rows;
  rows.reserve(history.size());
  const double a0 = area(history.front().curve);
  const double l0 = perimeter(history.front().curve);
  for (const TimedState& st : history) {
    DiagnosticsRow row;
    row.t = st.t;
    row.area = area(st.curve);
    row.rel_area_loss = (row.area - a0) / a0;
    row.perimeter = perimeter(st.curve);
    row.norm_perimeter = row.perimeter / l0;
    row.mesh_ratio = mesh_ratio(st.curve);
    row.lambda = st.lambda;
    row.iterations = st.iterations;
    rows.push_back(row);
  }
  return rows;
}

namespace {

constexpr double kParamTol = 1e-12;

struct SegIntersection {
  double s = 0.0;  // parameter on the first segment
  double t = 0.0;  // parameter on the second segment
  bool crossing = false;
  bool degenerate = false;
};

SegIntersection intersect_segments(const Vec2& p1, const Vec2& p2,
                                   const Vec2& q1, const Vec2& q2) {
  SegIntersection r;
  const Vec2 d1 = p2 - p1, d2 = q2 - q1, w = q1 - p1;
  const double denom = d1.cross(d2);
  const double scale = d1.norm() * d2.norm();
  if (std::abs(denom) <= 1e-14 * scale) {
    // Parallel; collinear overlap is a degeneracy.
    if (std::abs(w.cross(d1)) <= 1e-12 * std::max(scale, w.norm() * d1.norm())) {
      const double inv = d1.squared_norm();
      if (inv > 0.0) {
        double a = w.dot(d1) / inv;
        double b = (q2 - p1).dot(d1) / inv;
        if (a > b) std::swap(a, b);
        if (b >= -kParamTol && a <= 1.0 + kParamTol) r.degenerate = true;
      }
    }
    return r;
  }
  r.s = w.cross(d2) / denom;
  r.t = w.cross(d1) / denom;
  if (r.s < -kParamTol || r.s > 1.0 + kParamTol || r.t < -kParamTol ||
      r.t > 1.0 + kParamTol) {
    return r;
  }
  const bool grazing = r.s < kParamTol || r.s > 1.0 - kParamTol ||
                       r.t < kParamTol || r.t > 1.0 - kParamTol;
  if (grazing) {
    r.degenerate = true;
  } else {
    r.crossing = true;
  }
  return r;
}

// Even-odd crossing-number test; midpoints handed to this are assumed to be
// strictly off the boundary.
bool point_in_polygon(const Vec2& p, const PolygonalCurve& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t s = 0; s < n; ++s) {
    const Vec2& a = poly.node(s);
    const Vec2& b = poly.node((s + 1) % n);
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

// Line-integral contribution of the sub-edges of `poly` lying inside
// `other`, split at the stored per-edge crossing parameters. The kept
// sub-edges together trace the boundary of the intersection region, so the
// summed shoelace terms give (orientation-signed) twice its area.
bool clip_area_contribution(const PolygonalCurve& poly,
                            const PolygonalCurve& other,
                            const std::vector<std::vector<double>>& cuts,
                            double* accum) {
  const std::size_t n = poly.size();
  for (std::size_t s = 0; s < n; ++s) {
    const Vec2& a = poly.node(s);
    const Vec2& b = poly.node((s + 1) % n);
    std::vector<double> params = cuts[s];
    params.push_back(0.0);
    params.push_back(1.0);
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
      const double lo = params[i], hi = params[i + 1];
      if (hi - lo <= kParamTol) continue;
      const Vec2 p = a + lo * (b - a);
      const Vec2 q = a + hi * (b - a);
      const Vec2 mid = a + 0.5 * (lo + hi) * (b - a);
      if (point_in_polygon(mid, other)) *accum += 0.5 * p.cross(q);
    }
  }
  return true;
}

}  // namespace

bool is_simple_polygon(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent segment pairs (they share a node).
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const SegIntersection r =
          intersect_segments(curve.node(i), curve.node((i + 1) % n),
                             curve.node(j), curve.node((j + 1) % n));
      if (r.crossing || r.degenerate) return false;
    }
  }
  return true;
}

ManifoldDistanceResult manifold_distance_detailed(const PolygonalCurve& c1,
                                                  const PolygonalCurve& c2) {
  if (!is_simple_polygon(c1)) throw SelfIntersecting("first curve is not simple");
  if (!is_simple_polygon(c2)) throw SelfIntersecting("second curve is not simple");
  const double a1 = area(c1), a2 = area(c2);
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw InvalidSpec("manifold_distance requires positive-area curves");
  }

  const std::size_t n1 = c1.size(), n2 = c2.size();
  std::vector<std::vector<double>> cuts1(n1), cuts2(n2);
  bool degenerate = false;
  for (std::size_t i = 0; i < n1 && !degenerate; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const SegIntersection r =
          intersect_segments(c1.node(i), c1.node((i + 1) % n1), c2.node(j),
                             c2.node((j + 1) % n2));
      if (r.degenerate) {
        degenerate = true;
        break;
      }
      if (r.crossing) {
        cuts1[i].push_back(r.s);
        cuts2[j].push_back(r.t);
      }
    }
  }
  if (degenerate) {
    return {rasterized_symmetric_difference(c1, c2), true};
  }
  double twice_signed = 0.0;
  clip_area_contribution(c1, c2, cuts1, &twice_signed);
  clip_area_contribution(c2, c1, cuts2, &twice_signed);
  const double intersection_area = std::abs(twice_signed);
  return {a1 + a2 - 2.0 * intersection_area, false};
}

double manifold_distance(const PolygonalCurve& c1, const PolygonalCurve& c2) {
  return manifold_distance_detailed(c1, c2).value;
}

namespace {

// Sorted x-crossings of the polygon boundary with the horizontal line y.
void scanline_crossings(const PolygonalCurve& poly, double y,
                        std::vector<double>* out) {
  out->clear();
  const std::size_t n = poly.size();
  for (std::size_t s = 0; s < n; ++s) {
    const Vec2& a = poly.node(s);
    const Vec2& b = poly.node((s + 1) % n);
    if ((a.y > y) != (b.y > y)) {
      out->push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
  }
  std::sort(out->begin(), out->end());
}

bool parity_inside(const std::vector<double>& crossings, double x) {
  const auto it = std::upper_bound(crossings.begin(), crossings.end(), x);
  return ((crossings.end() - it) % 2) != 0;
}

}  // namespace

double rasterized_symmetric_difference(const PolygonalCurve& c1,
                                       const PolygonalCurve& c2, int grid) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PolygonalCurve* c : {&c1, &c2}) {
    for (const Vec2& p : c->nodes()) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  if (!(xmax > xmin) || !(ymax > ymin)) return 0.0;
  const double cx = (xmax - xmin) / grid, cy = (ymax - ymin) / grid;
  std::vector<double> cross1, cross2;
  long long count = 0;
  for (int r = 0; r < grid; ++r) {
    const double y = ymin + (r + 0.5) * cy;
    scanline_crossings(c1, y, &cross1);
    scanline_crossings(c2, y, &cross2);
    for (int c = 0; c < grid; ++c) {
      const double x = xmin + (c + 0.5) * cx;
      if (parity_inside(cross1, x) != parity_inside(cross2, x)) ++count;
    }
  }
  return static_cast<double>(count) * cx * cy;
}

}  // namespace curveflow
