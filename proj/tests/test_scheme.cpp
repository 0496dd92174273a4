#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curveflow/curve.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/scheme.hpp"
#include "helpers.hpp"

using namespace curveflow;
using namespace curveflow::testing;

namespace {

// Independent summation oracle for the mass-lumped product: explicit loop
// over both one-sided limits of every segment.
template <typename T>
double brute_inner(const PiecewiseField<T>& u, const PiecewiseField<T>& v,
                   const PolygonalCurve& curve) {
  const auto len = segment_lengths(curve);
  const std::size_t n = curve.size();
  double sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t right = (s + 1) % n;  // node at rho_j^-
    const std::size_t left = s;             // node at rho_{j-1}^+
    double at_right, at_left;
    if constexpr (std::is_same_v<T, double>) {
      at_right = u.limit(right, s) * v.limit(right, s);
      at_left = u.limit(left, s) * v.limit(left, s);
    } else {
      at_right = u.limit(right, s).dot(v.limit(right, s));
      at_left = u.limit(left, s).dot(v.limit(left, s));
    }
    sum += 0.5 * len[s] * (at_right + at_left);
  }
  return sum;
}

NodalField random_field(std::mt19937& rng, std::size_t n, double lo,
                        double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  NodalField f(n);
  for (auto& x : f) x = d(rng);
  return f;
}

}  // namespace

TEST_CASE("mass lumped inner product of ones is the perimeter") {
  for (std::size_t n : {4, 13, 64}) {
    const auto curve = regular_ngon(n);
    const auto ones = PiecewiseField<double>::nodal(NodalField(n, 1.0));
    CHECK(mass_lumped_inner(ones, ones, curve) == perimeter(curve));
  }
}

TEST_CASE("mass lumped inner product matches brute-force summation") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    const auto curve = random_star_polygon(rng, n);
    const bool u_seg = rng() % 2, v_seg = rng() % 2;
    auto mk = [&](bool per_segment) {
      auto vals = random_field(rng, n, -2.0, 2.0);
      return per_segment ? PiecewiseField<double>::per_segment(vals)
                         : PiecewiseField<double>::nodal(vals);
    };
    const auto u = mk(u_seg), v = mk(v_seg);
    const double got = mass_lumped_inner(u, v, curve);
    const double want = brute_inner(u, v, curve);
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("mass lumped inner product, hand-checked ramp on the square") {
  const auto curve = unit_square();
  NodalField u{0, 1, 2, 3};
  const auto uf = PiecewiseField<double>::nodal(u);
  const auto ones = PiecewiseField<double>::nodal(NodalField(4, 1.0));
  // all |h_j| = 1: sum over nodes of u_j (each node carries weight 1)
  CHECK(mass_lumped_inner(uf, ones, curve) ==
        doctest::Approx(6.0).epsilon(1e-15));
  CHECK(mass_lumped_inner(uf, uf, curve) ==
        doctest::Approx(14.0).epsilon(1e-15));
}

TEST_CASE("bilinearity with a per-segment constant factor") {
  std::mt19937 rng(5);
  const auto curve = random_star_polygon(rng, 12);
  const auto u = PiecewiseField<double>::nodal(random_field(rng, 12, -1, 1));
  const double c = 2.75;
  const auto cv = PiecewiseField<double>::per_segment(NodalField(12, c));
  const auto ones = PiecewiseField<double>::nodal(NodalField(12, 1.0));
  CHECK(mass_lumped_inner(u, cv, curve) ==
        doctest::Approx(c * mass_lumped_inner(u, ones, curve)).epsilon(1e-14));
}

TEST_CASE("symmetry and positivity") {
  std::mt19937 rng(6);
  const auto curve = random_star_polygon(rng, 10);
  const auto u = PiecewiseField<double>::nodal(random_field(rng, 10, -3, 3));
  const auto v = PiecewiseField<double>::nodal(random_field(rng, 10, -3, 3));
  CHECK(mass_lumped_inner(u, v, curve) == mass_lumped_inner(v, u, curve));
  CHECK(mass_lumped_inner(u, u, curve) >= 0.0);
}

TEST_CASE("arc derivative") {
  const auto curve = unit_square();
  SUBCASE("positions give unit tangents") {
    const auto d = arc_derivative(curve.nodes(), curve);
    const auto f = frames(curve);
    for (std::size_t s = 0; s < 4; ++s) {
      CHECK(d[s].x == doctest::Approx(f.tangent[s].x).epsilon(1e-15));
      CHECK(d[s].y == doctest::Approx(f.tangent[s].y).epsilon(1e-15));
    }
  }
  SUBCASE("constant field vanishes") {
    const auto d = arc_derivative(NodalField(4, 3.5), curve);
    for (double v : d) CHECK(v == 0.0);
  }
  SUBCASE("linear ramp, hand sum") {
    // segment s joins node s to node s+1 with |h| = 1
    const auto d = arc_derivative(NodalField{0, 1, 2, 3}, curve);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(1.0));
    CHECK(d[3] == doctest::Approx(-3.0));
  }
}

TEST_CASE("half step normal") {
  const auto curve = regular_ngon(16);
  SUBCASE("same curve reproduces the frame normals") {
    const auto n = half_step_normal(curve, curve);
    const auto f = frames(curve);
    for (std::size_t s = 0; s < 16; ++s) {
      CHECK(n[s].x == doctest::Approx(f.normal[s].x).epsilon(1e-14));
      CHECK(n[s].y == doctest::Approx(f.normal[s].y).epsilon(1e-14));
    }
  }
  SUBCASE("scaling the new curve by two gives 1.5 x normals") {
    std::vector<Vec2> scaled;
    for (const auto& p : curve.nodes()) scaled.push_back({2 * p.x, 2 * p.y});
    const auto n = half_step_normal(curve, PolygonalCurve(scaled));
    const auto f = frames(curve);
    for (std::size_t s = 0; s < 16; ++s) {
      CHECK(n[s].x == doctest::Approx(1.5 * f.normal[s].x).epsilon(1e-14));
      CHECK(n[s].y == doctest::Approx(1.5 * f.normal[s].y).epsilon(1e-14));
    }
  }
  SUBCASE("random perturbation matches the direct formula") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-0.01, 0.01);
    std::vector<Vec2> moved;
    for (const auto& p : curve.nodes()) {
      moved.push_back({p.x + d(rng), p.y + d(rng)});
    }
    const PolygonalCurve curve_new(moved);
    const auto n = half_step_normal(curve, curve_new);
    const auto h_old = segment_vectors(curve);
    const auto h_new = segment_vectors(curve_new);
    const auto len = segment_lengths(curve);
    for (std::size_t s = 0; s < 16; ++s) {
      const Vec2 sum = {h_old[s].x + h_new[s].x, h_old[s].y + h_new[s].y};
      // perp is the clockwise rotation (a,b) -> (b,-a)
      const Vec2 want = {-sum.y / (2 * len[s]), sum.x / (2 * len[s])};
      CHECK(n[s].x == doctest::Approx(want.x).epsilon(1e-14));
      CHECK(n[s].y == doctest::Approx(want.y).epsilon(1e-14));
    }
  }
}

TEST_CASE("kappa power conventions") {
  CHECK(kappa_pow(-2.5, 1.0) == -2.5);  // alpha = 1 is the plain identity
  CHECK(kappa_pow(0.0, 0.5) == 0.0);
  CHECK(kappa_pow(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kappa_pow(2.0, -1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(kappa_pow(-1.0, 0.5), CurvatureSignViolation);
  CHECK_THROWS_AS(kappa_pow(0.0, -1.0), CurvatureSignViolation);
}

TEST_CASE("curvature sign modes") {
  FlowParams p;
  p.beta = -1.0;
  SUBCASE("alpha = 1 accepts negative curvature") {
    p.alpha = 1.0;
    check_curvature_sign({1.0, -2.0, 0.0}, p);
  }
  SUBCASE("fractional alpha requires nonnegative curvature") {
    p.alpha = 0.5;
    check_curvature_sign({1.0, 0.0}, p);
    CHECK_THROWS_AS(check_curvature_sign({1.0, -1e-3}, p),
                    CurvatureSignViolation);
  }
  SUBCASE("negative alpha requires strictly positive curvature") {
    p.alpha = -1.0;
    p.beta = 1.0;
    check_curvature_sign({0.5, 2.0}, p);
    CHECK_THROWS_AS(check_curvature_sign({0.5, 0.0}, p),
                    CurvatureSignViolation);
  }
}

TEST_CASE("discrete lambda") {
  const auto curve = regular_ngon(20);
  FlowParams p;
  SUBCASE("constant curvature two, alpha 1, beta -1") {
    p.alpha = 1.0;
    p.beta = -1.0;
    CHECK(lambda_discrete(NodalField(20, 2.0), curve, p) ==
          doctest::Approx(-2.0).epsilon(1e-14));
  }
  SUBCASE("curvature one gives beta for any alpha") {
    for (double alpha : {2.0, 1.0 / 3.0, -2.0}) {
      p.alpha = alpha;
      p.beta = alpha > 0 ? -3.0 : 3.0;
      CHECK(lambda_discrete(NodalField(20, 1.0), curve, p) ==
            doctest::Approx(p.beta).epsilon(1e-14));
    }
  }
  SUBCASE("random curvature matches the brute-force quotient") {
    std::mt19937 rng(13);
    p.alpha = 1.0 / 3.0;
    p.beta = -1.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto c = random_star_polygon(rng, 18);
      const auto kappa = random_field(rng, 18, 0.1, 3.0);
      NodalField powed(18);
      for (std::size_t j = 0; j < 18; ++j) {
        powed[j] = p.beta * std::pow(kappa[j], p.alpha);
      }
      const auto num = PiecewiseField<double>::nodal(powed);
      const auto ones = PiecewiseField<double>::nodal(NodalField(18, 1.0));
      const double want = brute_inner(num, ones, c) / brute_inner(ones, ones, c);
      CHECK(lambda_discrete(kappa, c, p) ==
            doctest::Approx(want).epsilon(1e-13));
    }
  }
  SUBCASE("scale invariance in the curve") {
    std::mt19937 rng(14);
    const auto c = random_star_polygon(rng, 18);
    const auto kappa = random_field(rng, 18, 0.1, 3.0);
    p.alpha = 2.0;
    p.beta = -1.0;
    std::vector<Vec2> scaled;
    for (const auto& v : c.nodes()) scaled.push_back({3 * v.x, 3 * v.y});
    CHECK(lambda_discrete(kappa, PolygonalCurve(scaled), p) ==
          doctest::Approx(lambda_discrete(kappa, c, p)).epsilon(1e-13));
  }
}

TEST_CASE("residual vanishes at the polygonal equilibrium") {
  const auto curve = regular_ngon(64);
  const auto kappa = project_curvature(curve);
  for (double alpha : {1.0, 2.0, -1.0}) {
    FlowParams p;
    p.alpha = alpha;
    p.beta = alpha > 0 ? -1.0 : 1.0;
    p.tau = 1e-2;
    const auto r = residual(curve, kappa, curve, p);
    for (double v : r.scalar_block) CHECK(std::abs(v) < 1e-12);
    for (const auto& v : r.vector_block) {
      CHECK(std::abs(v.x) < 1e-12);
      CHECK(std::abs(v.y) < 1e-12);
    }
  }
}

TEST_CASE("residual velocity term scales as one over tau") {
  std::mt19937 rng(21);
  const auto curve_old = random_star_polygon(rng, 12);
  std::uniform_real_distribution<double> d(-0.02, 0.02);
  std::vector<Vec2> moved;
  for (const auto& p : curve_old.nodes()) {
    moved.push_back({p.x + d(rng), p.y + d(rng)});
  }
  const PolygonalCurve curve_new(moved);
  const auto kappa = random_field(rng, 12, 0.2, 2.0);
  auto scalar_at = [&](double tau) {
    FlowParams p;
    p.alpha = 1.0;
    p.beta = -1.0;
    p.tau = tau;
    return residual(curve_new, kappa, curve_old, p).scalar_block;
  };
  const auto r1 = scalar_at(0.01), r2 = scalar_at(0.02), r4 = scalar_at(0.04);
  // with R(tau) = V/tau - C: R(t)-R(2t) = 2 (R(2t)-R(4t))
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(r1[k] - r2[k] ==
          doctest::Approx(2.0 * (r2[k] - r4[k])).epsilon(1e-10));
  }
}

TEST_CASE("residual is translation equivariant") {
  std::mt19937 rng(22);
  const auto curve_old = random_star_polygon(rng, 14);
  std::uniform_real_distribution<double> d(-0.02, 0.02);
  std::vector<Vec2> moved;
  for (const auto& p : curve_old.nodes()) {
    moved.push_back({p.x + d(rng), p.y + d(rng)});
  }
  const PolygonalCurve curve_new(moved);
  const auto kappa = random_field(rng, 14, 0.2, 2.0);
  FlowParams p;
  p.tau = 0.01;
  const auto r = residual(curve_new, kappa, curve_old, p);
  const Vec2 shift{17.0, -4.5};
  const auto rt = residual(translate(curve_new, shift), kappa,
                           translate(curve_old, shift), p);
  for (std::size_t k = 0; k < 14; ++k) {
    CHECK(rt.scalar_block[k] ==
          doctest::Approx(r.scalar_block[k]).epsilon(1e-9));
    CHECK(rt.vector_block[k].x ==
          doctest::Approx(r.vector_block[k].x).epsilon(1e-9));
    CHECK(rt.vector_block[k].y ==
          doctest::Approx(r.vector_block[k].y).epsilon(1e-9));
  }
}

TEST_CASE("stationary curves drop the velocity term exactly") {
  std::mt19937 rng(23);
  const auto curve = random_star_polygon(rng, 16);
  const auto kappa = random_field(rng, 16, 0.2, 2.0);
  FlowParams p;
  p.alpha = 1.0;
  p.beta = -1.0;
  p.tau = 1e-6;  // would blow up any nonzero velocity term
  const auto r1 = residual(curve, kappa, curve, p);
  p.tau = 1.0;
  const auto r2 = residual(curve, kappa, curve, p);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(r1.scalar_block[k] == r2.scalar_block[k]);
  }
}

TEST_CASE("projected curvature of regular polygons") {
  double prev = 10.0;
  for (std::size_t n : {16, 64, 256}) {
    const auto kappa = project_curvature(regular_ngon(n));
    for (double k : kappa) {
      CHECK(k == doctest::Approx(kappa[0]).epsilon(1e-12));
    }
    CHECK(kappa[0] > 1.0);     // inscribed polygon overshoots 1/R
    CHECK(kappa[0] < prev);    // and approaches it monotonically
    prev = kappa[0];
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("projected curvature detects cancelling normals") {
  // spike: the two segments at the tip have equal lengths and opposite
  // normals, so the weighted normal average vanishes
  const PolygonalCurve spike({{0, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 1.0 + 0.0}});
  CHECK_THROWS_AS(project_curvature(spike), SingularNodalNormal);
}

TEST_CASE("projected curvature converges on the ellipse") {
  const double a = 3.0, b = 1.0;
  double err_prev = 1e9;
  for (std::size_t n : {64, 128, 256}) {
    std::vector<Vec2> nodes(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double th = -2.0 * kPi * static_cast<double>(j) / n;
      nodes[j] = {a * std::cos(th), b * std::sin(th)};
    }
    const auto kappa = project_curvature(PolygonalCurve(nodes));
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double th = -2.0 * kPi * static_cast<double>(j) / n;
      const double s2 = std::sin(th) * std::sin(th);
      const double c2 = std::cos(th) * std::cos(th);
      const double exact = a * b / std::pow(a * a * s2 + b * b * c2, 1.5);
      err = std::max(err, std::abs(kappa[j] - exact));
    }
    CHECK(err < err_prev / 3.0);  // roughly O(h^2)
    err_prev = err;
  }
}

TEST_CASE("weighted power means") {
  const std::vector<double> w{1.0, 2.0, 3.0};
  const std::vector<double> x{1.0, 2.0, 4.0};
  CHECK(weighted_power_mean(w, x, 1.0) ==
        doctest::Approx(17.0 / 6.0).epsilon(1e-14));
  // p = 0 is the weighted geometric mean
  CHECK(weighted_power_mean(w, x, 0.0) ==
        doctest::Approx(std::pow(1.0 * 4.0 * 64.0, 1.0 / 6.0)).epsilon(1e-13));
  CHECK(weighted_power_mean(w, x, -1.0) ==
        doctest::Approx(6.0 / (1.0 + 1.0 + 0.75)).epsilon(1e-13));
}

TEST_CASE("power mean inequality predicate") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> wv(0.05, 1.0), xv(0.1, 5.0);
  const double alphas[] = {2.0, 1.0 / 3.0, -2.0, -1.0 / 3.0, -1.0};
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 3 + rng() % 20;
    std::vector<double> w(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = wv(rng);
      x[i] = xv(rng);
    }
    for (double alpha : alphas) {
      // the (p, q) pairs of the perimeter-decrease argument, ordered p < q
      std::vector<std::pair<double, double>> pairs;
      if (alpha > 0) {
        pairs = {{1.0, (alpha + 1.0) / alpha}, {1.0, alpha + 1.0}};
      } else {
        pairs = {{(alpha + 1.0) / alpha, 1.0}, {alpha + 1.0, 1.0}};
      }
      for (auto [p, q] : pairs) {
        CHECK(power_mean_inequality_holds(w, x, p, q));
      }
    }
    // reversed order with spread-out values must fail
    CHECK_FALSE(power_mean_inequality_holds({1.0, 1.0}, {1.0, 3.0}, 2.0, 1.0));
  }
}
