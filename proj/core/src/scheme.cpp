#include "curveflow/scheme.hpp"

#include <cmath>
#include <string>

#include "curveflow/errors.hpp"

namespace curveflow {

void FlowParams::validate() const {
  if (!(alpha * beta < 0.0)) {
    throw InvalidSpec("FlowParams requires alpha*beta < 0 (alpha=" +
                      std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
  if (!(tau > 0.0)) throw InvalidSpec("FlowParams requires tau > 0");
}

namespace {

CurvatureSign effective_sign(const FlowParams& params) {
  if (params.curvature_sign_mode != CurvatureSign::Automatic) {
    return params.curvature_sign_mode;
  }
  if (params.alpha < 0.0) return CurvatureSign::Positive;
  if (params.alpha != 1.0) return CurvatureSign::NonNegative;
  return CurvatureSign::None;
}

template <typename T>
double mass_lumped_inner_impl(const PiecewiseField<T>& u,
                              const PiecewiseField<T>& v,
                              const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  auto expected = [n](const PiecewiseField<T>& f) {
    return f.values.size() == n;
  };
  if (!expected(u) || !expected(v)) {
    throw InvalidSpec("mass_lumped_inner: field length does not match curve");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t lo = s;             // node rho_{j-1}
    const std::size_t hi = (s + 1) % n;   // node rho_j
    const double len = (curve.node(hi) - curve.node(lo)).norm();
    double prod_hi, prod_lo;
    if constexpr (std::is_same_v<T, double>) {
      prod_hi = u.limit(hi, s) * v.limit(hi, s);
      prod_lo = u.limit(lo, s) * v.limit(lo, s);
    } else {
      prod_hi = u.limit(hi, s).dot(v.limit(hi, s));
      prod_lo = u.limit(lo, s).dot(v.limit(lo, s));
    }
    sum += 0.5 * len * (prod_hi + prod_lo);
  }
  return sum;
}

}  // namespace

double mass_lumped_inner(const PiecewiseField<double>& u,
                         const PiecewiseField<double>& v,
                         const PolygonalCurve& curve) {
  return mass_lumped_inner_impl(u, v, curve);
}

double mass_lumped_inner(const PiecewiseField<Vec2>& u,
                         const PiecewiseField<Vec2>& v,
                         const PolygonalCurve& curve) {
  return mass_lumped_inner_impl(u, v, curve);
}

std::vector<double> arc_derivative(const NodalField& field,
                                   const PolygonalCurve& reference) {
  const std::size_t n = reference.size();
  if (field.size() != n) {
    throw InvalidSpec("arc_derivative: field length does not match curve");
  }
  const std::vector<double> len = segment_lengths(reference);
  std::vector<double> d(n);
  for (std::size_t s = 0; s < n; ++s) {
    d[s] = (field[(s + 1) % n] - field[s]) / len[s];
  }
  return d;
}

std::vector<Vec2> arc_derivative(const std::vector<Vec2>& field,
                                 const PolygonalCurve& reference) {
  const std::size_t n = reference.size();
  if (field.size() != n) {
    throw InvalidSpec("arc_derivative: field length does not match curve");
  }
  const std::vector<double> len = segment_lengths(reference);
  std::vector<Vec2> d(n);
  for (std::size_t s = 0; s < n; ++s) {
    d[s] = (field[(s + 1) % n] - field[s]) / len[s];
  }
  return d;
}

std::vector<Vec2> half_step_normal(const PolygonalCurve& curve_old,
                                   const PolygonalCurve& curve_new) {
  const std::size_t n = curve_old.size();
  if (curve_new.size() != n) {
    throw InvalidSpec("half_step_normal: curve sizes differ");
  }
  const std::vector<Vec2> h_old = segment_vectors(curve_old);
  const std::vector<Vec2> h_new = segment_vectors(curve_new);
  const std::vector<double> len_old = segment_lengths(curve_old);
  std::vector<Vec2> n_half(n);
  for (std::size_t s = 0; s < n; ++s) {
    n_half[s] = -((h_old[s] + h_new[s]).perp()) / (2.0 * len_old[s]);
  }
  return n_half;
}

double kappa_pow(double kappa, double alpha) {
  if (alpha == 1.0) return kappa;
  if (kappa > 0.0) return std::exp(alpha * std::log(kappa));
  if (kappa == 0.0) {
    if (alpha > 0.0) return 0.0;
    throw CurvatureSignViolation("kappa = 0 with alpha < 0");
  }
  throw CurvatureSignViolation("kappa^alpha with negative kappa, alpha = " +
                               std::to_string(alpha));
}

void check_curvature_sign(const NodalField& kappa, const FlowParams& params) {
  const CurvatureSign req = effective_sign(params);
  if (req == CurvatureSign::None) return;
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    const bool ok = (req == CurvatureSign::Positive) ? kappa[j] > 0.0
                                                     : kappa[j] >= 0.0;
    if (!ok) {
      throw CurvatureSignViolation(
          "kappa[" + std::to_string(j) + "] = " + std::to_string(kappa[j]) +
          " violates the sign assumption for alpha = " +
          std::to_string(params.alpha));
    }
  }
}

double lambda_discrete(const NodalField& kappa, const PolygonalCurve& curve,
                       const FlowParams& params) {
  const std::size_t n = curve.size();
  if (kappa.size() != n) {
    throw InvalidSpec("lambda_discrete: kappa length does not match curve");
  }
  check_curvature_sign(kappa, params);
  const std::vector<double> len = segment_lengths(curve);
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t lo = s, hi = (s + 1) % n;
    num += 0.5 * len[s] *
           (params.beta * kappa_pow(kappa[hi], params.alpha) +
            params.beta * kappa_pow(kappa[lo], params.alpha));
    den += len[s];
  }
  return num / den;
}

Residual residual(const PolygonalCurve& curve_new, const NodalField& kappa_new,
                  const PolygonalCurve& curve_old, const FlowParams& params) {
  const std::size_t n = curve_old.size();
  if (curve_new.size() != n || kappa_new.size() != n) {
    throw InvalidSpec("residual: size mismatch");
  }
  const std::vector<double> len = segment_lengths(curve_old);
  const std::vector<Vec2> h_new = segment_vectors(curve_new);
  const std::vector<Vec2> n_half = half_step_normal(curve_old, curve_new);
  const double lambda = lambda_discrete(kappa_new, curve_old, params);

  Residual r;
  r.scalar_block.resize(n);
  r.vector_block.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t in = (k + n - 1) % n;  // segment ending at node k
    const std::size_t out = k;               // segment starting at node k
    // Length-weighted half-step normal average at node k.
    const Vec2 M = 0.5 * (len[in] * n_half[in] + len[out] * n_half[out]);
    const double w = 0.5 * (len[in] + len[out]);
    const Vec2 vel = (curve_new.node(k) - curve_old.node(k)) / params.tau;
    r.scalar_block[k] =
        vel.dot(M) -
        w * (params.beta * kappa_pow(kappa_new[k], params.alpha) - lambda);
    r.vector_block[k] =
        kappa_new[k] * M - (h_new[in] / len[in] - h_new[out] / len[out]);
  }
  return r;
}

NodalField project_curvature(const PolygonalCurve& curve) {
  const std::size_t n = curve.size();
  const SegmentFrame f = frames(curve);
  NodalField kappa(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t in = (k + n - 1) % n;
    const std::size_t out = k;
    const Vec2 N = 0.5 * (f.length[in] * f.normal[in] + f.length[out] * f.normal[out]);
    const Vec2 T = f.tangent[in] - f.tangent[out];
    const double nn = N.squared_norm();
    if (N.norm() < 1e-14) {
      throw SingularNodalNormal("adjacent segment normals cancel at node " +
                                std::to_string(k));
    }
    // Least-squares scalar of the 2-equations-1-unknown nodal system.
    kappa[k] = N.dot(T) / nn;
  }
  return kappa;
}

double weighted_power_mean(const std::vector<double>& weights,
                           const std::vector<double>& values, double p) {
  double num = 0.0, den = 0.0;
  if (p == 0.0) {
    // limit case: weighted geometric mean
    for (std::size_t i = 0; i < weights.size(); ++i) {
      num += weights[i] * std::log(values[i]);
      den += weights[i];
    }
    return std::exp(num / den);
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    num += weights[i] * std::pow(values[i], p);
    den += weights[i];
  }
  return std::pow(num / den, 1.0 / p);
}

bool power_mean_inequality_holds(const std::vector<double>& weights,
                                 const std::vector<double>& values, double p,
                                 double q, double rel_tol) {
  const double mp = weighted_power_mean(weights, values, p);
  const double mq = weighted_power_mean(weights, values, q);
  return mp <= mq * (1.0 + rel_tol) + rel_tol;
}

}  // namespace curveflow
