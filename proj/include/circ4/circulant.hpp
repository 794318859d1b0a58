#pragma once

#include "circ4/expr.hpp"
#include "circ4/geometry.hpp"
#include "circ4/tensor.hpp"

namespace circ4 {

/// The canonical circulant structure: the cyclic shift with Q(0,1) = Q(1,2)
/// = Q(2,3) = Q(3,0) = 1, so that Q e_1 = e_4 (1-based). Q^4 = I, Q^2 != +-I.
Mat4 canonical_q();

/// Metric g = circ(A,B,C,B): every row is the cyclic right-shift of the
/// previous one, starting from (A,B,C,B). This is the general symmetric form
/// compatible with the canonical constant Q. Positive definiteness on the
/// box is equivalent to A+2B+C > 0, A-C > 0, A-2B+C > 0 (circulant
/// eigenvalues through the discrete Fourier basis).
struct CirculantMetricSpec {
  Expr A;
  Expr B;
  Expr C;
  std::array<Interval, 4> domain{};
  std::string label;
};

ManifoldSpec to_manifold_spec(const CirculantMetricSpec& cs);

/// Infinity norm of Q^T g Q - g; zero iff Q is an isometry of g.
double compatibility_residual(const Mat4& g, const Mat4& q);

/// Eigenvalues of circ(A,B,C,B) for constant entries: {A+2B+C, A-C, A-2B+C, A-C}.
std::array<double, 4> circulant_eigenvalues(double a, double b, double c);

}  // namespace circ4
