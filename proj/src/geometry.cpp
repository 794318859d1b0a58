#include "circ4/geometry.hpp"

#include <cmath>
#include <utility>

namespace circ4 {

namespace {

constexpr double kMinorFloor = 1e-12;        // positive definiteness threshold
constexpr double kStructureTol = 1e-10;      // per-entry Q^4 = I and compatibility

ExprGrid symbolic_product(const ExprGrid& a, const ExprGrid& b) {
  ExprGrid out;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) {
      Expr s = Expr::constant(0.0);
      for (int l = 0; l < 4; ++l) s = Expr::add(std::move(s), Expr::mul(a[k][l], b[l][j]));
      out[k][j] = std::move(s);
    }
  return out;
}

std::array<ExprGrid, 4> grid_derivatives(const ExprGrid& g) {
  std::array<ExprGrid, 4> out;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[k][i][j] = differentiate(g[i][j], k + 1);
  return out;
}

Mat4 eval_grid(const ExprGrid& g, const Vec4& p) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = evaluate(g[i][j], p);
  return out;
}

double minor_det(const Mat4& g, int n) {
  // determinant of the leading n x n block by elimination with pivoting
  double m[4][4];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = g(i, j);
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c][j], m[piv][j]);
      det = -det;
    }
    if (m[c][c] == 0.0) return 0.0;
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace

ManifoldSpec::ManifoldSpec(std::string label, ExprGrid g_exprs, ExprGrid q_exprs,
                           std::array<Interval, 4> domain)
    : label_(std::move(label)),
      g_(std::move(g_exprs)),
      q_(std::move(q_exprs)),
      p_(symbolic_product(q_, q_)),
      domain_(domain),
      dg_(grid_derivatives(g_)),
      dq_(grid_derivatives(q_)),
      dp_(grid_derivatives(p_)) {
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ddg_[l][k][i][j] = differentiate(dg_[k][i][j], l + 1);
}

bool ManifoldSpec::contains(const Vec4& p) const {
  for (int i = 0; i < 4; ++i) {
    const double x = p[static_cast<std::size_t>(i)];
    if (!(x >= domain_[static_cast<std::size_t>(i)].lo &&
          x <= domain_[static_cast<std::size_t>(i)].hi))
      return false;
  }
  return true;
}

namespace {

// Shared by frame_at and nabla_of_field: metric data and Christoffels at p.
struct MetricFrame {
  Mat4 g, ginv;
  T3 dg;
  T3 gamma;
};

MetricFrame metric_frame(const ManifoldSpec& spec, const Vec4& p) {
  MetricFrame out;
  try {
    out.g = eval_grid(spec.g_exprs(), p);
  } catch (const EvalError& e) {
    throw PointError(std::string("metric evaluation failed: ") + e.what());
  }

  const double gscale = std::max(1.0, inf_norm(out.g));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(out.g(i, j) - out.g(j, i)) > 1e-12 * gscale)
        throw PointError("metric components are not symmetric");

  for (int n = 1; n <= 4; ++n)
    if (!(minor_det(out.g, n) > kMinorFloor))
      throw PointError("metric is not positive definite");

  try {
    out.ginv = mat_inverse(out.g);
  } catch (const SingularError&) {
    throw PointError("metric is singular");
  }

  try {
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.dg(k, i, j) = evaluate(spec.dg(k, i, j), p);
  } catch (const EvalError& e) {
    throw PointError(std::string("metric derivative evaluation failed: ") + e.what());
  }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l)
          s += out.ginv(k, l) * (out.dg(i, j, l) + out.dg(j, i, l) - out.dg(l, i, j));
        out.gamma(i, j, k) = 0.5 * s;
      }
  return out;
}

// out(i,j,k) = d_i A^k_j + Gamma^k_il A^l_j - Gamma^l_ij A^k_l
T3 covariant_derivative(const T3& gamma, const Mat4& field, const T3& dfield) {
  T3 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = dfield(i, k, j);
        for (int l = 0; l < 4; ++l)
          s += gamma(i, l, k) * field(l, j) - gamma(i, j, l) * field(k, l);
        out(i, j, k) = s;
      }
  return out;
}

T3 eval_field_derivatives(const ManifoldSpec& spec, bool of_q, const Vec4& p) {
  T3 out;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        out(k, i, j) = evaluate(of_q ? spec.dq(k, i, j) : spec.dp(k, i, j), p);
  return out;
}

}  // namespace

GeometryFrame frame_at(const ManifoldSpec& spec, const Vec4& p) {
  if (!spec.contains(p)) throw PointError("point outside the sampling domain");

  GeometryFrame f;
  f.point = p;
  const MetricFrame mf = metric_frame(spec, p);
  f.g = mf.g;
  f.ginv = mf.ginv;
  f.dg = mf.dg;
  f.gamma = mf.gamma;

  try {
    f.Q = eval_grid(spec.q_exprs(), p);
    f.P = eval_grid(spec.p_exprs(), p);
  } catch (const EvalError& e) {
    throw PointError(std::string("structure evaluation failed: ") + e.what());
  }

  const Mat4 q4 = mat_mul(f.P, f.P);
  if (inf_norm(mat_sub(q4, Mat4::identity())) > kStructureTol)
    throw PointError("structure fourth power deviates from the identity");

  const double gscale = std::max(1.0, inf_norm(f.g));
  if (inf_norm(mat_sub(mat_mul(transpose(f.Q), mat_mul(f.g, f.Q)), f.g)) >
      kStructureTol * gscale)
    throw PointError("structure is not compatible with the metric");

  T3 dq, dp;
  try {
    dq = eval_field_derivatives(spec, true, p);
    dp = eval_field_derivatives(spec, false, p);
  } catch (const EvalError& e) {
    throw PointError(std::string("structure derivative evaluation failed: ") + e.what());
  }
  f.nablaQ = covariant_derivative(f.gamma, f.Q, dq);
  f.nablaP = covariant_derivative(f.gamma, f.P, dp);

  // Curvature. dginv and dgamma are assembled from the symbolic first and
  // second metric derivatives, so no finite differencing enters anywhere.
  T4 ddg;
  try {
    for (int l = 0; l < 4; ++l)
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) ddg(l, k, i, j) = evaluate(spec.ddg(l, k, i, j), p);
  } catch (const EvalError& e) {
    throw PointError(std::string("second derivative evaluation failed: ") + e.what());
  }

  T3 dginv;  // dginv(i,l,m) = d_i g^lm = -g^la (d_i g_ab) g^bm
  for (int i = 0; i < 4; ++i)
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        double s = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) s += f.ginv(l, a) * f.dg(i, a, b) * f.ginv(b, m);
        dginv(i, l, m) = -s;
      }

  T4 dgamma;  // dgamma(i,j,k,l) = d_i Gamma^l_jk
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) {
            s += dginv(i, l, m) * (f.dg(j, k, m) + f.dg(k, j, m) - f.dg(m, j, k));
            s += f.ginv(l, m) * (ddg(i, j, k, m) + ddg(i, k, j, m) - ddg(i, m, j, k));
          }
          dgamma(i, j, k, l) = 0.5 * s;
        }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) {
            double rup = dgamma(i, j, k, l) - dgamma(j, i, k, l);
            for (int a = 0; a < 4; ++a)
              rup += f.gamma(i, a, l) * f.gamma(j, k, a) - f.gamma(j, a, l) * f.gamma(i, k, a);
            s += f.g(l, m) * rup;
          }
          f.R(i, j, k, m) = s;
        }

  return f;
}

T3 nabla_of_field(const ManifoldSpec& spec, const ExprGrid& field, const Vec4& p) {
  if (!spec.contains(p)) throw PointError("point outside the sampling domain");
  const MetricFrame mf = metric_frame(spec, p);
  Mat4 values;
  T3 derivatives;
  try {
    values = eval_grid(field, p);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          derivatives(k, i, j) = evaluate(differentiate(field[i][j], k + 1), p);
  } catch (const EvalError& e) {
    throw PointError(std::string("field evaluation failed: ") + e.what());
  }
  return covariant_derivative(mf.gamma, values, derivatives);
}

double metricity_residual(const GeometryFrame& f) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = f.dg(k, i, j);
        for (int l = 0; l < 4; ++l)
          s -= f.gamma(k, i, l) * f.g(l, j) + f.gamma(k, j, l) * f.g(i, l);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

CurvatureSymmetry curvature_symmetry_residuals(const GeometryFrame& f) {
  const double scale = std::max(1e-300, inf_norm(f.R));
  CurvatureSymmetry out{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          out.antisym_first_pair =
              std::max(out.antisym_first_pair, std::abs(f.R(i, j, k, l) + f.R(j, i, k, l)));
          out.antisym_last_pair =
              std::max(out.antisym_last_pair, std::abs(f.R(i, j, k, l) + f.R(i, j, l, k)));
          out.pair_symmetry =
              std::max(out.pair_symmetry, std::abs(f.R(i, j, k, l) - f.R(k, l, i, j)));
          out.first_bianchi =
              std::max(out.first_bianchi,
                       std::abs(f.R(i, j, k, l) + f.R(j, k, i, l) + f.R(k, i, j, l)));
        }
  out.antisym_first_pair /= scale;
  out.antisym_last_pair /= scale;
  out.pair_symmetry /= scale;
  out.first_bianchi /= scale;
  return out;
}

}  // namespace circ4
