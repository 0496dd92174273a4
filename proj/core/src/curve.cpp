#include "curveflow/curve.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "curveflow/errors.hpp"

namespace curveflow {

PolygonalCurve::PolygonalCurve(std::vector<Vec2> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) {
    throw InvalidSpec("PolygonalCurve requires at least 3 nodes, got " +
                      std::to_string(nodes_.size()));
  }
  for (const Vec2& p : nodes_) {
    if (!p.finite()) throw InvalidSpec("PolygonalCurve node is not finite");
  }
}

std::vector<Vec2> segment_vectors(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<Vec2> h(n);
  for (std::size_t s = 0; s < n; ++s) {
    h[s] = curve.node((s + 1) % n) - curve.node(s);
  }
  return h;
}

std::vector<double> segment_lengths(const PolygonalCurve& curve) {
  const std::vector<Vec2> h = segment_vectors(curve);
  std::vector<double> len(h.size());
  for (std::size_t s = 0; s < h.size(); ++s) {
    len[s] = h[s].norm();
    if (len[s] == 0.0) {
      throw ZeroSegment("zero-length segment at index " + std::to_string(s));
    }
  }
  return len;
}

SegmentFrame frames(const PolygonalCurve& curve) {
  const std::vector<Vec2> h = segment_vectors(curve);
  SegmentFrame f;
  f.tangent.resize(h.size());
  f.normal.resize(h.size());
  f.length.resize(h.size());
  for (std::size_t s = 0; s < h.size(); ++s) {
    const double len = h[s].norm();
    if (len == 0.0) {
      throw ZeroSegment("zero-length segment at index " + std::to_string(s));
    }
    f.length[s] = len;
    f.tangent[s] = h[s] / len;
    f.normal[s] = -(h[s].perp()) / len;
  }
  return f;
}

namespace {

// Exactly rounded sum via a nonoverlapping expansion (Shewchuk grow-expansion)
// so that summing the negated terms in any order negates the result exactly.
double exact_sum(std::vector<double>& terms) {
  std::vector<double> expansion;
  for (double t : terms) {
    std::size_t out = 0;
    for (double e : expansion) {
      const double s = t + e;
      const double bv = s - t;
      const double err = (t - (s - bv)) + (e - bv);
      if (err != 0.0) expansion[out++] = err;
      t = s;
    }
    expansion.resize(out);
    if (t != 0.0) expansion.push_back(t);
  }
  double total = 0.0;
  for (double e : expansion) total += e;
  return total;
}

}  // namespace

double area(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2& prev = curve.node(j == 0 ? n - 1 : j - 1);
    const Vec2& cur = curve.node(j);
    terms[j] = (cur.x - prev.x) * (cur.y + prev.y);
  }
  return 0.5 * exact_sum(terms);
}

double perimeter(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  double L = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    L += (curve.node((s + 1) % n) - curve.node(s)).norm();
  }
  return L;
}

double mesh_ratio(const PolygonalCurve& curve) {
  const std::vector<double> len = segment_lengths(curve);
  double lo = len[0], hi = len[0];
  for (double l : len) {
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return hi / lo;
}

double min_segment_length(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  double lo = (curve.node(1) - curve.node(0)).norm();
  for (std::size_t s = 1; s < n; ++s) {
    lo = std::min(lo, (curve.node((s + 1) % n) - curve.node(s)).norm());
  }
  return lo;
}

PolygonalCurve reverse(const PolygonalCurve& curve) {
  std::vector<Vec2> rev(curve.nodes().rbegin(), curve.nodes().rend());
  return PolygonalCurve(std::move(rev));
}

Vec2 centroid(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  // Shoelace centroid; cross term sign cancels between numerator and area.
  double a2 = 0.0;
  Vec2 c{0.0, 0.0};
  for (std::size_t s = 0; s < n; ++s) {
    const Vec2& p = curve.node(s);
    const Vec2& q = curve.node((s + 1) % n);
    const double w = p.cross(q);
    a2 += w;
    c += (p + q) * w;
  }
  if (a2 == 0.0) throw InvalidSpec("centroid of a zero-area polygon");
  return c / (3.0 * a2);
}

PolygonalCurve translate(const PolygonalCurve& curve, const Vec2& offset) {
  std::vector<Vec2> nodes = curve.nodes();
  for (Vec2& p : nodes) p += offset;
  return PolygonalCurve(std::move(nodes));
}

PolygonalCurve load_curve_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("curve JSON parse error: ") + e.what());
  }
  if (!j.is_array() || j.size() < 3) {
    throw InvalidSpec("curve JSON must be an array of at least 3 [x, y] pairs");
  }
  std::vector<Vec2> nodes;
  nodes.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number()) {
      throw InvalidSpec("curve JSON entries must be [x, y] number pairs");
    }
    Vec2 p{item[0].get<double>(), item[1].get<double>()};
    if (!p.finite()) throw InvalidSpec("curve JSON contains NaN/Inf coordinate");
    nodes.push_back(p);
  }
  PolygonalCurve curve(std::move(nodes));
  if (area(curve) < 0.0) {
    std::clog << "curveflow: input curve is counterclockwise; reversing to the "
                 "clockwise storage convention\n";
    return reverse(curve);
  }
  return curve;
}

PolygonalCurve load_curve_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open curve file: " + path);
  return load_curve_json(in);
}

void save_curve_json(const PolygonalCurve& curve, std::ostream& out) {
  nlohmann::json j = nlohmann::json::array();
  for (const Vec2& p : curve.nodes()) {
    j.push_back({p.x, p.y});
  }
  out << j.dump() << '\n';
}

}  // namespace curveflow
