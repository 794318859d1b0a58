#pragma once

// Shared generators and oracles for the test suites. Everything here is
// deliberately independent of the library's computation paths: finite
// differences instead of symbolic derivatives, explicit loops instead of
// tensor helpers, a direct linear solve instead of mat_inverse.

#include <array>
#include <cmath>
#include <random>

#include "circ4/expr.hpp"
#include "circ4/tensor.hpp"

namespace testsupport {

using circ4::Expr;
using circ4::Mat4;
using circ4::T3;
using circ4::Vec4;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline Vec4 random_point(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi),
          uniform(rng, lo, hi)};
}

/// Random polynomial expression tree of bounded depth (total on all of R^4,
/// so evaluation never hits a domain error).
inline Expr random_polynomial(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || rng() % 4 == 0) {
    if (rng() % 2 == 0) return Expr::constant(uniform(rng, -3.0, 3.0));
    return Expr::variable(1 + static_cast<int>(rng() % 4));
  }
  switch (rng() % 5) {
    case 0:
      return Expr::add(random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 1:
      return Expr::sub(random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 2:
      return Expr::mul(random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 3:
      return Expr::neg(random_polynomial(rng, depth - 1));
    default:
      return Expr::pow(random_polynomial(rng, depth - 1),
                       Expr::constant(static_cast<double>(1 + rng() % 3)));
  }
}

/// Random smooth expression including sin/cos/exp; arguments are kept small
/// by construction so values stay well away from overflow.
inline Expr random_smooth(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || rng() % 4 == 0) {
    if (rng() % 2 == 0) return Expr::constant(uniform(rng, -2.0, 2.0));
    return Expr::variable(1 + static_cast<int>(rng() % 4));
  }
  switch (rng() % 7) {
    case 0:
      return Expr::add(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 1:
      return Expr::sub(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 2:
      return Expr::mul(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 3:
      return Expr::sin(random_smooth(rng, depth - 1));
    case 4:
      return Expr::cos(random_smooth(rng, depth - 1));
    case 5:
      return Expr::mul(Expr::constant(0.25), Expr::sin(random_smooth(rng, depth - 1)));
    default:
      return Expr::pow(random_smooth(rng, depth - 1),
                       Expr::constant(static_cast<double>(1 + rng() % 2)));
  }
}

/// Central finite difference in coordinate k (1-based).
inline double central_difference(const Expr& e, int k, const Vec4& p, double h) {
  Vec4 hi = p, lo = p;
  hi[static_cast<std::size_t>(k - 1)] += h;
  lo[static_cast<std::size_t>(k - 1)] -= h;
  return (circ4::evaluate(e, hi) - circ4::evaluate(e, lo)) / (2.0 * h);
}

/// Solves a x = b by plain Gaussian elimination; the oracle counterpart of
/// mat_inverse. Returns false on a zero pivot.
inline bool solve4(const Mat4& a, const Vec4& b, Vec4& x) {
  double m[4][5];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m[i][j] = a(i, j);
    m[i][4] = b[static_cast<std::size_t>(i)];
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return false;
    for (int j = 0; j < 5; ++j) std::swap(m[c][j], m[piv][j]);
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int j = 0; j < 5; ++j) m[r][j] -= f * m[c][j];
    }
  }
  for (int i = 0; i < 4; ++i) x[static_cast<std::size_t>(i)] = m[i][4] / m[i][i];
  return true;
}

/// Column-by-column inverse through solve4.
inline Mat4 inverse_oracle(const Mat4& a) {
  Mat4 out;
  for (int col = 0; col < 4; ++col) {
    Vec4 e{}, x{};
    e[static_cast<std::size_t>(col)] = 1.0;
    solve4(a, e, x);
    for (int i = 0; i < 4; ++i) out(i, col) = x[static_cast<std::size_t>(i)];
  }
  return out;
}

inline Mat4 random_well_conditioned(std::mt19937_64& rng) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = uniform(rng, -1.0, 1.0) + (i == j ? 5.0 : 0.0);
  return m;
}

inline T3 random_t3(std::mt19937_64& rng) {
  T3 t;
  for (double& x : t.a) x = uniform(rng, -1.0, 1.0);
  return t;
}

}  // namespace testsupport
