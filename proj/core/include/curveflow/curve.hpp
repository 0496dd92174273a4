#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "curveflow/vec2.hpp"

namespace curveflow {

/// Closed polygonal curve. Nodes are indexed 0..N-1 and the polygon is
/// implicitly closed (node N == node 0). Segment j (1-based, cyclic) joins
/// node j-1 to node j; in code segment s = 0..N-1 joins node s to node s+1.
///
/// Storage convention: curves are stored clockwise, so that the signed area
/// A = 1/2 sum (x_j - x_{j-1})(y_j + y_{j-1}) is positive and the per-segment
/// normal -(h_j)^perp/|h_j| points outward. Immutable once constructed.
class PolygonalCurve {
 public:
  explicit PolygonalCurve(std::vector<Vec2> nodes);

  std::size_t size() const { return nodes_.size(); }
  const Vec2& node(std::size_t j) const { return nodes_[j]; }
  const std::vector<Vec2>& nodes() const { return nodes_; }

 private:
  std::vector<Vec2> nodes_;
};

/// Per-segment unit tangents, outward unit normals and lengths.
struct SegmentFrame {
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;
  std::vector<double> length;
};

/// h_j = nodes[j] - nodes[j-1], cyclic; entry s holds segment s+1.
std::vector<Vec2> segment_vectors(const PolygonalCurve& curve);

/// Per-segment lengths |h_j|. Throws ZeroSegment if any vanishes exactly.
std::vector<double> segment_lengths(const PolygonalCurve& curve);

/// Unit tangents tau_j = h_j/|h_j| and outward normals n_j = -(h_j)^perp/|h_j|.
SegmentFrame frames(const PolygonalCurve& curve);

/// Signed area A = 1/2 sum (x_j - x_{j-1})(y_j + y_{j-1}); positive for the
/// clockwise storage convention. No sign correction is applied.
double area(const PolygonalCurve& curve);

/// Sum of segment lengths, accumulated in segment order.
double perimeter(const PolygonalCurve& curve);

/// h_max / h_min over segments. Throws ZeroSegment when h_min = 0.
double mesh_ratio(const PolygonalCurve& curve);

/// Shortest segment length.
double min_segment_length(const PolygonalCurve& curve);

/// Same node set traversed in the opposite direction; negates the area.
PolygonalCurve reverse(const PolygonalCurve& curve);

/// Area centroid of the enclosed region (requires nonzero area).
Vec2 centroid(const PolygonalCurve& curve);

/// Curve translated by a fixed offset.
PolygonalCurve translate(const PolygonalCurve& curve, const Vec2& offset);

/// JSON serialization: an array of [x, y] pairs in node order.
/// Loading rejects N < 3 and non-finite coordinates; a counterclockwise
/// curve (negative signed area) is reversed and a notice is logged.
PolygonalCurve load_curve_json(std::istream& in);
PolygonalCurve load_curve_json_file(const std::string& path);
void save_curve_json(const PolygonalCurve& curve, std::ostream& out);

}  // namespace curveflow
