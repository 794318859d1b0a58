#include "circ4/circulant.hpp"

namespace circ4 {

Mat4 canonical_q() {
  Mat4 q;
  q(0, 1) = 1.0;
  q(1, 2) = 1.0;
  q(2, 3) = 1.0;
  q(3, 0) = 1.0;
  return q;
}

ManifoldSpec to_manifold_spec(const CirculantMetricSpec& cs) {
  const std::array<Expr, 4> row{cs.A, cs.B, cs.C, cs.B};
  ExprGrid g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = row[static_cast<std::size_t>(((j - i) % 4 + 4) % 4)];

  const Mat4 q = canonical_q();
  ExprGrid q_exprs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q_exprs[i][j] = Expr::constant(q(i, j));

  return ManifoldSpec(cs.label, std::move(g), std::move(q_exprs), cs.domain);
}

double compatibility_residual(const Mat4& g, const Mat4& q) {
  return inf_norm(mat_sub(mat_mul(transpose(q), mat_mul(g, q)), g));
}

std::array<double, 4> circulant_eigenvalues(double a, double b, double c) {
  return {a + 2.0 * b + c, a - c, a - 2.0 * b + c, a - c};
}

}  // namespace circ4
