#include "circ4/tensor.hpp"

#include <cmath>

namespace circ4 {

Mat4 Mat4::identity() {
  Mat4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

Mat4 mat_sub(const Mat4& a, const Mat4& b) {
  Mat4 out;
  for (std::size_t i = 0; i < 16; ++i) out.a[i] = a.a[i] - b.a[i];
  return out;
}

Mat4 transpose(const Mat4& a) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = a(j, i);
  return out;
}

double trace(const Mat4& a) { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

Mat4 mat_inverse(const Mat4& a) {
  const double scale = inf_norm(a);
  // Gauss-Jordan on [a | I] with partial pivoting; det accumulates from pivots.
  double m[4][8] = {};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m[i][j] = a(i, j);
    m[i][4 + i] = 1.0;
  }
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (pivot != col) {
      for (int j = 0; j < 8; ++j) std::swap(m[col][j], m[pivot][j]);
      det = -det;
    }
    const double p = m[col][col];
    det *= p;
    if (p == 0.0) break;
    const double inv_p = 1.0 / p;
    for (int j = 0; j < 8; ++j) m[col][j] *= inv_p;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 8; ++j) m[r][j] -= f * m[col][j];
    }
  }
  if (scale == 0.0 || !(std::abs(det) >= 1e-12 * scale * scale * scale * scale) ||
      !std::isfinite(det))
    throw SingularError("matrix is numerically singular");
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m[i][4 + j];
  return out;
}

Vec4 apply(const Mat4& a, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += a(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

Vec4 contract_lee(const T3& f, const Mat4& ginv) {
  Vec4 out{};
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += ginv(i, j) * f(i, j, k);
    out[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

T3 lower(const T3& mixed, const Mat4& g) {
  T3 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 4; ++m) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += g(k, m) * mixed(i, j, k);
        out(i, j, m) = s;
      }
  return out;
}

double inf_norm(const Vec4& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

double inf_norm(const Mat4& m) {
  double n = 0.0;
  for (double x : m.a) n = std::max(n, std::abs(x));
  return n;
}

double inf_norm(const T3& t) {
  double n = 0.0;
  for (double x : t.a) n = std::max(n, std::abs(x));
  return n;
}

double inf_norm(const T4& t) {
  double n = 0.0;
  for (double x : t.a) n = std::max(n, std::abs(x));
  return n;
}

T3 compose_slot(const T3& t, const Mat4& m, int slot) {
  T3 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (int a = 0; a < 4; ++a) {
          switch (slot) {
            case 0: s += t(a, j, k) * m(a, i); break;
            case 1: s += t(i, a, k) * m(a, j); break;
            default: s += t(i, j, a) * m(a, k); break;
          }
        }
        out(i, j, k) = s;
      }
  return out;
}

T4 compose_slot(const T4& t, const Mat4& m, int slot) {
  T4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int a = 0; a < 4; ++a) {
            switch (slot) {
              case 0: s += t(a, j, k, l) * m(a, i); break;
              case 1: s += t(i, a, k, l) * m(a, j); break;
              case 2: s += t(i, j, a, l) * m(a, k); break;
              default: s += t(i, j, k, a) * m(a, l); break;
            }
          }
          out(i, j, k, l) = s;
        }
  return out;
}

T3 cyclic_sum(const T3& t) {
  T3 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out(i, j, k) = t(i, j, k) + t(j, k, i) + t(k, i, j);
  return out;
}

}  // namespace circ4
