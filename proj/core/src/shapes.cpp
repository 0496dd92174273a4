#include "curveflow/shapes.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "curveflow/errors.hpp"

namespace curveflow {

namespace {

template <typename F>
PolygonalCurve sample_clockwise(std::size_t n, F&& point_at) {
  std::vector<Vec2> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = point_at(2.0 * std::numbers::pi * static_cast<double>(j) /
                        static_cast<double>(n));
  }
  PolygonalCurve curve(std::move(nodes));
  // The parametrizations are counterclockwise-natural; store clockwise.
  return area(curve) < 0.0 ? reverse(curve) : curve;
}

}  // namespace

PolygonalCurve generate(const ShapeSpec& spec) {
  if (spec.n_nodes < 3) {
    throw InvalidSpec("shape requires at least 3 nodes");
  }
  const std::size_t n = spec.n_nodes;
  return std::visit(
      [&](const auto& kind) -> PolygonalCurve {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, ShapeSpec::Ellipse>) {
          if (!(kind.a > 0.0) || !(kind.b > 0.0)) {
            throw InvalidSpec("ellipse semi-axes must be positive");
          }
          return sample_clockwise(n, [&](double t) {
            return Vec2{kind.a * std::cos(t), kind.b * std::sin(t)};
          });
        } else if constexpr (std::is_same_v<T, ShapeSpec::Circle>) {
          if (!(kind.r > 0.0)) throw InvalidSpec("circle radius must be positive");
          return sample_clockwise(n, [&](double t) {
            return Vec2{kind.r * std::cos(t), kind.r * std::sin(t)};
          });
        } else if constexpr (std::is_same_v<T, ShapeSpec::CaseI>) {
          return sample_clockwise(n, [](double t) {
            const double r = 2.0 + std::cos(6.0 * t);
            return Vec2{r * std::cos(t), r * std::sin(t)};
          });
        } else if constexpr (std::is_same_v<T, ShapeSpec::CaseII>) {
          return sample_clockwise(n, [](double t) {
            const double st = std::sin(t);
            return Vec2{std::cos(t), 2.0 * st - 1.9 * st * st * st};
          });
        } else if constexpr (std::is_same_v<T, ShapeSpec::CaseIII>) {
          return sample_clockwise(n, [](double t) {
            const double st = std::sin(t), ct = std::cos(t);
            const double s3t = std::sin(3.0 * t);
            const double y =
                0.5 * st + std::sin(ct) + (0.2 + st * s3t * s3t) * st;
            return Vec2{ct, y};
          });
        } else {
          static_assert(std::is_same_v<T, ShapeSpec::Polygon>);
          return load_curve_json_file(kind.file);
        }
      },
      spec.kind);
}

}  // namespace curveflow
