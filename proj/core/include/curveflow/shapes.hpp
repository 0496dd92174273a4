#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Initial-curve generators. The four benchmark shapes are sampled at
/// uniform values of the parametrization variable theta; the flower/dumbbell
/// shapes deliberately produce a non-uniform arc-length distribution.
struct ShapeSpec {
  struct Ellipse { double a = 3.0, b = 1.0; };
  struct Circle { double r = 1.0; };
  struct CaseI {};
  struct CaseII {};
  struct CaseIII {};
  struct Polygon { std::string file; };

  std::variant<Ellipse, Circle, CaseI, CaseII, CaseIII, Polygon> kind =
      Ellipse{};
  std::size_t n_nodes = 32;
};

/// Samples the spec at theta_j = 2*pi*j/N and reorders to the clockwise
/// storage convention. Polygon{} loads the curve JSON format instead.
/// Throws InvalidSpec on bad parameters.
PolygonalCurve generate(const ShapeSpec& spec);

}  // namespace curveflow
