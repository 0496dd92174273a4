#include "curveflow/solver.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <lapacke.h>
#include <Eigen/Dense>

#include "curveflow/errors.hpp"

namespace curveflow {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidSpec("SolverConfig requires tol > 0");
  if (max_iter < 1) throw InvalidSpec("SolverConfig requires max_iter >= 1");
}

std::vector<std::vector<double>> CyclicBlockTridiagonal::dense() const {
  const std::size_t n = dim();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  auto put = [&](std::size_t rnode, std::size_t cnode, const Block3& b) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a[3 * rnode + r][3 * cnode + c] += b[3 * r + c];
  };
  for (std::size_t k = 0; k < n_nodes; ++k) {
    put(k, k, diag[k]);
    put(k, (k + 1) % n_nodes, upper[k]);
    put(k, (k + n_nodes - 1) % n_nodes, lower[k]);
  }
  return a;
}

std::vector<double> CyclicBlockTridiagonal::apply(const std::vector<double>& z) const {
  std::vector<double> y(dim(), 0.0);
  auto acc = [&](std::size_t rnode, std::size_t cnode, const Block3& b) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        y[3 * rnode + r] += b[3 * r + c] * z[3 * cnode + c];
  };
  for (std::size_t k = 0; k < n_nodes; ++k) {
    acc(k, k, diag[k]);
    acc(k, (k + 1) % n_nodes, upper[k]);
    acc(k, (k + n_nodes - 1) % n_nodes, lower[k]);
  }
  return y;
}

namespace {

// LU of the cyclic block tridiagonal matrix: LAPACK banded factorization of
// the acyclic band plus a rank-6 Woodbury correction for the two corner
// blocks (lower[0] and upper[N-1]).
class CyclicBandedLU {
 public:
  static constexpr int kl = 5, ku = 5;

  bool factor(const CyclicBlockTridiagonal& m) {
    n_ = static_cast<lapack_int>(m.dim());
    const std::size_t nn = m.n_nodes;
    ldab_ = 2 * kl + ku + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
    double norm = 0.0;
    auto put = [&](lapack_int r, lapack_int c, double v) {
      ab_[static_cast<std::size_t>(c) * ldab_ + (kl + ku + r - c)] += v;
      norm = std::max(norm, std::abs(v));
    };
    for (std::size_t k = 0; k < nn; ++k) {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          put(3 * k + r, 3 * k + c, m.diag[k][3 * r + c]);
          if (k + 1 < nn) put(3 * k + r, 3 * (k + 1) + c, m.upper[k][3 * r + c]);
          if (k > 0) put(3 * k + r, 3 * (k - 1) + c, m.lower[k][3 * r + c]);
        }
      }
    }
    ipiv_.resize(n_);
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku,
                                     ab_.data(), ldab_, ipiv_.data());
    if (info != 0) return false;
    for (lapack_int c = 0; c < n_; ++c) {
      if (std::abs(ab_[static_cast<std::size_t>(c) * ldab_ + kl + ku]) <
          1e-14 * norm) {
        return false;
      }
    }

    // Woodbury data for the corner blocks.
    w_.assign(static_cast<std::size_t>(n_) * 6, 0.0);
    for (int i = 0; i < 3; ++i) {
      w_[static_cast<std::size_t>(i) * n_ + i] = 1.0;                    // e_i
      w_[static_cast<std::size_t>(3 + i) * n_ + (n_ - 3 + i)] = 1.0;     // e_{n-3+i}
    }
    if (LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 6, ab_.data(), ldab_,
                       ipiv_.data(), w_.data(), n_) != 0) {
      return false;
    }
    vt_ = Eigen::MatrixXd::Zero(6, n_);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        vt_(r, n_ - 3 + c) = m.lower[0][3 * r + c];
        vt_(3 + r, c) = m.upper[nn - 1][3 * r + c];
      }
    }
    Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(6, 6);
    for (int j = 0; j < 6; ++j) {
      cap.col(j) += vt_ * Eigen::Map<Eigen::VectorXd>(w_.data() + static_cast<std::size_t>(j) * n_, n_);
    }
    cap_lu_.compute(cap);
    if (cap_lu_.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-14) {
      return false;
    }
    return true;
  }

  bool solve(const std::vector<double>& b, std::vector<double>& z) const {
    z = b;
    if (LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 1, ab_.data(), ldab_,
                       ipiv_.data(), z.data(), n_) != 0) {
      return false;
    }
    Eigen::Map<Eigen::VectorXd> zv(z.data(), n_);
    Eigen::VectorXd s = cap_lu_.solve(vt_ * zv);
    for (int j = 0; j < 6; ++j) {
      zv -= s[j] * Eigen::Map<const Eigen::VectorXd>(
                       w_.data() + static_cast<std::size_t>(j) * n_, n_);
    }
    return true;
  }

 private:
  lapack_int n_ = 0, ldab_ = 0;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
  std::vector<double> w_;  // band-inverse applied to the 6 corner columns
  Eigen::MatrixXd vt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> cap_lu_;
};

std::vector<double> solve_dense(const AssembledSystem& sys) {
  const std::size_t n = sys.local_matrix.dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const auto rows = sys.local_matrix.dense();
  double norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a(r, c) = rows[r][c] + sys.rank_one_u[r] * sys.rank_one_v[c];
      norm = std::max(norm, std::abs(a(r, c)));
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double min_pivot =
      lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (norm == 0.0 || !(min_pivot >= 1e-14 * norm)) {
    throw SingularSystem("dense factorization pivot below threshold");
  }
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), n);
  Eigen::VectorXd x = lu.solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> solve_system(const AssembledSystem& sys) {
  const std::size_t n = sys.local_matrix.dim();
  // structured path needs enough nodes that the corner blocks stay clear of
  // the band; tiny systems go straight to the dense factorization
  if (n > 96) {
    CyclicBandedLU lu;
    if (lu.factor(sys.local_matrix)) {
      std::vector<double> z1, z2;
      if (lu.solve(sys.rhs, z1) && lu.solve(sys.rank_one_u, z2)) {
        const double denom = 1.0 + vdot(sys.rank_one_v, z2);
        if (std::abs(denom) < 1e-14) {
          throw SingularSystem("rank-one update denominator vanishes");
        }
        const double scale = vdot(sys.rank_one_v, z1) / denom;
        for (std::size_t i = 0; i < n; ++i) z1[i] -= scale * z2[i];
        return z1;
      }
    }
    // factorization breakdown: fall through to the dense path
  }
  return solve_dense(sys);
}

namespace {

struct AssemblyGeometry {
  std::vector<double> len;     // old segment lengths
  std::vector<Vec2> n_half;    // half-step normals at the iterate
  std::vector<Vec2> M;         // length-weighted normal average per node
  std::vector<double> w;       // lumped node weight
  double L = 0.0;              // old perimeter
};

AssemblyGeometry assembly_geometry(const PolygonalCurve& curve_iter,
                                   const PolygonalCurve& curve_old) {
  const std::size_t n = curve_old.size();
  AssemblyGeometry g;
  g.len = segment_lengths(curve_old);
  g.n_half = half_step_normal(curve_old, curve_iter);
  g.M.resize(n);
  g.w.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t in = (k + n - 1) % n, out = k;
    g.M[k] = 0.5 * (g.len[in] * g.n_half[in] + g.len[out] * g.n_half[out]);
    g.w[k] = 0.5 * (g.len[in] + g.len[out]);
  }
  for (double l : g.len) g.L += l;
  return g;
}

double kappa_pow_am1(double kappa, double alpha) {
  return alpha == 1.0 ? 1.0 : kappa_pow(kappa, alpha - 1.0);
}

}  // namespace

AssembledSystem assemble_newton(const PolygonalCurve& curve_iter,
                                const NodalField& kappa_iter,
                                const PolygonalCurve& curve_old,
                                const FlowParams& params) {
  const std::size_t n = curve_old.size();
  if (curve_iter.size() != n || kappa_iter.size() != n) {
    throw InvalidSpec("assemble_newton: size mismatch");
  }
  check_curvature_sign(kappa_iter, params);
  const AssemblyGeometry g = assembly_geometry(curve_iter, curve_old);
  const Residual res = residual(curve_iter, kappa_iter, curve_old, params);

  AssembledSystem sys(n);
  const double ab = params.alpha * params.beta;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t in = (k + n - 1) % n, out = k;
    const double ia = 1.0 / g.len[in], ib = 1.0 / g.len[out];
    const Vec2 vel = (curve_iter.node(k) - curve_old.node(k)) / params.tau;
    const double kap = kappa_iter[k];
    const double gk = kappa_pow_am1(kap, params.alpha);

    sys.local_matrix.diag[k] = {
        g.M[k].x / params.tau, g.M[k].y / params.tau, -ab * gk * g.w[k],
        -(ia + ib),            0.0,                   g.M[k].x,
        0.0,                   -(ia + ib),            g.M[k].y};
    sys.local_matrix.upper[k] = {
        vel.y / 4.0, -vel.x / 4.0, 0.0,
        ib,          -kap / 4.0,   0.0,
        kap / 4.0,   ib,           0.0};
    sys.local_matrix.lower[k] = {
        -vel.y / 4.0, vel.x / 4.0, 0.0,
        ia,           kap / 4.0,   0.0,
        -kap / 4.0,   ia,          0.0};

    sys.rank_one_u[3 * k] = ab * g.w[k] / g.L;
    sys.rank_one_v[3 * k + 2] = gk * g.w[k];
    sys.rhs[3 * k] = -res.scalar_block[k];
    sys.rhs[3 * k + 1] = -res.vector_block[k].x;
    sys.rhs[3 * k + 2] = -res.vector_block[k].y;
  }
  return sys;
}

AssembledSystem assemble_picard(const PolygonalCurve& curve_iter,
                                const NodalField& kappa_iter,
                                const PolygonalCurve& curve_old,
                                const FlowParams& params,
                                bool alpha_beta_variant) {
  const std::size_t n = curve_old.size();
  if (curve_iter.size() != n || kappa_iter.size() != n) {
    throw InvalidSpec("assemble_picard: size mismatch");
  }
  check_curvature_sign(kappa_iter, params);
  const AssemblyGeometry g = assembly_geometry(curve_iter, curve_old);

  AssembledSystem sys(n);
  const double coeff =
      alpha_beta_variant ? params.alpha * params.beta : params.beta;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t in = (k + n - 1) % n, out = k;
    const double ia = 1.0 / g.len[in], ib = 1.0 / g.len[out];
    const double gk = kappa_pow_am1(kappa_iter[k], params.alpha);

    sys.local_matrix.diag[k] = {
        g.M[k].x / params.tau, g.M[k].y / params.tau, -coeff * gk * g.w[k],
        -(ia + ib),            0.0,                   g.M[k].x,
        0.0,                   -(ia + ib),            g.M[k].y};
    sys.local_matrix.upper[k] = {
        0.0, 0.0, 0.0,
        ib,  0.0, 0.0,
        0.0, ib,  0.0};
    sys.local_matrix.lower[k] = {
        0.0, 0.0, 0.0,
        ia,  0.0, 0.0,
        0.0, ia,  0.0};

    sys.rank_one_u[3 * k] = coeff * g.w[k] / g.L;
    sys.rank_one_v[3 * k + 2] = gk * g.w[k];
    sys.rhs[3 * k] = curve_old.node(k).dot(g.M[k]) / params.tau;
  }
  return sys;
}

namespace {

StepResult finish_step(std::vector<Vec2> nodes, NodalField kappa,
                       const PolygonalCurve& curve_old,
                       const FlowParams& params, int iterations,
                       double final_norm) {
  check_curvature_sign(kappa, params);
  PolygonalCurve curve_new(std::move(nodes));
  const double collapse_threshold =
      1e-12 * perimeter(curve_old) / static_cast<double>(curve_old.size());
  if (min_segment_length(curve_new) <= collapse_threshold) {
    throw ZeroSegment("segment collapsed below the mesh guard threshold");
  }
  StepReport report;
  report.iterations = iterations;
  report.final_update_norm = final_norm;
  report.lambda = lambda_discrete(kappa, curve_old, params);
  report.area = area(curve_new);
  report.perimeter = perimeter(curve_new);
  report.mesh_ratio = mesh_ratio(curve_new);
  return StepResult{std::move(curve_new), std::move(kappa), report};
}

}  // namespace

StepResult newton_advance(const PolygonalCurve& curve_old,
                          const NodalField& kappa_old,
                          const FlowParams& params, const SolverConfig& config) {
  params.validate();
  config.validate();
  const std::size_t n = curve_old.size();
  if (kappa_old.size() != n) throw InvalidSpec("newton_advance: size mismatch");
  check_curvature_sign(kappa_old, params);

  std::vector<Vec2> nodes = curve_old.nodes();
  NodalField kappa = kappa_old;
  double norm = 0.0, prev_norm = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.max_iter; ++it) {
    AssembledSystem sys = [&] {
      try {
        return assemble_newton(PolygonalCurve(nodes), kappa, curve_old, params);
      } catch (const CurvatureSignViolation&) {
        if (it == 1) throw;  // input state violates the assumption
        throw MaxIterExceeded("curvature sign violated mid-iteration");
      }
    }();
    const std::vector<double> z = solve_system(sys);
    norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      nodes[k] += Vec2{z[3 * k], z[3 * k + 1]};
      kappa[k] += z[3 * k + 2];
      norm = std::max(norm, std::hypot(z[3 * k], z[3 * k + 1]) +
                                std::abs(z[3 * k + 2]));
    }
    if (it > 1 && norm > 1e3 * prev_norm) {
      throw MaxIterExceeded("Newton update norm diverged");
    }
    prev_norm = norm;
    if (norm <= config.tol) {
      return finish_step(std::move(nodes), std::move(kappa), curve_old, params,
                         it, norm);
    }
  }
  throw MaxIterExceeded("Newton iteration cap reached (max_iter=" +
                        std::to_string(config.max_iter) + ")");
}

StepResult picard_advance(const PolygonalCurve& curve_old,
                          const NodalField& kappa_old,
                          const FlowParams& params, const SolverConfig& config) {
  params.validate();
  config.validate();
  const std::size_t n = curve_old.size();
  if (kappa_old.size() != n) throw InvalidSpec("picard_advance: size mismatch");
  check_curvature_sign(kappa_old, params);

  std::vector<Vec2> nodes = curve_old.nodes();
  NodalField kappa = kappa_old;
  double norm = 0.0, prev_norm = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.max_iter; ++it) {
    AssembledSystem sys = [&] {
      try {
        return assemble_picard(PolygonalCurve(nodes), kappa, curve_old, params,
                               config.picard_alpha_beta);
      } catch (const CurvatureSignViolation&) {
        if (it == 1) throw;
        throw MaxIterExceeded("curvature sign violated mid-iteration");
      }
    }();
    const std::vector<double> z = solve_system(sys);
    norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 next{z[3 * k], z[3 * k + 1]};
      norm = std::max(norm, (next - nodes[k]).norm() +
                                std::abs(z[3 * k + 2] - kappa[k]));
      nodes[k] = next;
      kappa[k] = z[3 * k + 2];
    }
    if (it > 1 && norm > 1e3 * prev_norm) {
      throw MaxIterExceeded("Picard update norm diverged");
    }
    prev_norm = norm;
    if (norm <= config.tol) {
      return finish_step(std::move(nodes), std::move(kappa), curve_old, params,
                         it, norm);
    }
  }
  throw MaxIterExceeded("Picard iteration cap reached (max_iter=" +
                        std::to_string(config.max_iter) + ")");
}

StepResult advance(const PolygonalCurve& curve_old, const NodalField& kappa_old,
                   const FlowParams& params, const SolverConfig& config) {
  return config.method == SolverMethod::Newton
             ? newton_advance(curve_old, kappa_old, params, config)
             : picard_advance(curve_old, kappa_old, params, config);
}

}  // namespace curveflow
