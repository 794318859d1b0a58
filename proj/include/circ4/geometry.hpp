#pragma once

#include <stdexcept>
#include <string>

#include "circ4/expr.hpp"
#include "circ4/tensor.hpp"

namespace circ4 {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A sample point was rejected: expression domain violation, degenerate or
/// indefinite metric, or a structure field violating its invariants there.
struct PointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ExprGrid = std::array<std::array<Expr, 4>, 4>;

/// One chart of a 4-dimensional Riemannian manifold carrying a structure
/// field Q: symmetric metric components g_ij, (1,1)-components Q^k_j, and a
/// sampling box. All symbolic derivatives needed by frame_at (first and
/// second derivatives of g, first derivatives of Q and of P = Q^2) are
/// taken once at construction; instances are immutable afterwards and safe
/// to share across threads.
class ManifoldSpec {
 public:
  ManifoldSpec(std::string label, ExprGrid g_exprs, ExprGrid q_exprs,
               std::array<Interval, 4> domain);

  const std::string& label() const { return label_; }
  const std::array<Interval, 4>& domain() const { return domain_; }
  const ExprGrid& g_exprs() const { return g_; }
  const ExprGrid& q_exprs() const { return q_; }
  const ExprGrid& p_exprs() const { return p_; }

  bool contains(const Vec4& p) const;

  // derivative tables, first index = derivative direction
  const Expr& dg(int k, int i, int j) const { return dg_[k][i][j]; }
  const Expr& ddg(int l, int k, int i, int j) const { return ddg_[l][k][i][j]; }
  const Expr& dq(int k, int i, int j) const { return dq_[k][i][j]; }
  const Expr& dp(int k, int i, int j) const { return dp_[k][i][j]; }

 private:
  std::string label_;
  ExprGrid g_;
  ExprGrid q_;
  ExprGrid p_;  // symbolic Q*Q
  std::array<Interval, 4> domain_;
  std::array<ExprGrid, 4> dg_;
  std::array<std::array<ExprGrid, 4>, 4> ddg_;
  std::array<ExprGrid, 4> dq_;
  std::array<ExprGrid, 4> dp_;
};

/// All pointwise geometric data at one accepted sample point.
struct GeometryFrame {
  Vec4 point{};
  Mat4 g;       // metric components g_ij
  Mat4 ginv;    // g^ij
  T3 dg;        // dg(k,i,j) = d_k g_ij
  T3 gamma;     // gamma(i,j,k) = Gamma^k_ij (Levi-Civita)
  Mat4 Q;       // structure components Q^k_j
  Mat4 P;       // P = Q^2
  T3 nablaQ;    // nablaQ(i,j,k) = (nabla_i Q)^k_j
  T3 nablaP;
  T4 R;         // R(i,j,k,l) = g(R(e_i,e_j)e_k, e_l)
};

/// Evaluates the full frame at p. Throws PointError when p lies outside the
/// domain, an expression hits a domain violation, the metric is singular or
/// not positive definite (leading principal minors <= 1e-12), Q^4 deviates
/// from the identity by more than 1e-10 per entry, or the compatibility
/// g(Qx,Qy) = g(x,y) fails.
GeometryFrame frame_at(const ManifoldSpec& spec, const Vec4& p);

/// Covariant derivative of an arbitrary (1,1) field given by component
/// expressions: out(i,j,k) = d_i A^k_j + Gamma^k_il A^l_j - Gamma^l_ij A^k_l.
T3 nabla_of_field(const ManifoldSpec& spec, const ExprGrid& field, const Vec4& p);

/// Max-norm of nabla_k g_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
/// over all index triples; zero for a metric-compatible connection.
double metricity_residual(const GeometryFrame& f);

struct CurvatureSymmetry {
  double antisym_first_pair;  // R_ijkl + R_jikl
  double antisym_last_pair;   // R_ijkl + R_ijlk
  double pair_symmetry;       // R_ijkl - R_klij
  double first_bianchi;       // R_ijkl + R_jkil + R_kijl
};

/// Residuals normalized by max(1e-300, |R|_inf).
CurvatureSymmetry curvature_symmetry_residuals(const GeometryFrame& f);

}  // namespace circ4
