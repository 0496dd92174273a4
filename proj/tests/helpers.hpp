#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow::testing {

inline constexpr double kPi = 3.14159265358979323846;

/// Regular n-gon of circumradius r, clockwise (positive stored area).
inline PolygonalCurve regular_ngon(std::size_t n, double r = 1.0,
                                   Vec2 center = {0.0, 0.0}) {
  std::vector<Vec2> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = -2.0 * kPi * static_cast<double>(j) / n;
    nodes[j] = {center.x + r * std::cos(th), center.y + r * std::sin(th)};
  }
  return PolygonalCurve(nodes);
}

/// Clockwise unit square (0,0),(0,1),(1,1),(1,0); stored area +1.
inline PolygonalCurve unit_square() {
  return PolygonalCurve({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
}

/// Random star-shaped polygon around a center: simple by construction.
inline PolygonalCurve random_star_polygon(std::mt19937& rng, std::size_t n,
                                          Vec2 center = {0.0, 0.0}) {
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::vector<Vec2> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = -2.0 * kPi * static_cast<double>(j) / n;
    const double r = radius(rng);
    nodes[j] = {center.x + r * std::cos(th), center.y + r * std::sin(th)};
  }
  return PolygonalCurve(nodes);
}

}  // namespace curveflow::testing
