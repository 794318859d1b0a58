#pragma once

#include <array>
#include <stdexcept>

namespace circ4 {

/// Dense tensors over a fixed 4-dimensional fiber. Indices are 0-based in
/// code; the storage conventions used throughout the project are:
///   Mat4   m(i,j)       -- m maps e_j to Sum_i m(i,j) e_i, so (Qv)_i = Q(i,j) v_j
///   T3     gamma(i,j,k) -- Christoffel Gamma^k_ij
///   T3     nablaQ(i,j,k)-- (nabla_i Q)^k_j
///   T3     F(i,j,k)     -- F(e_i, e_j, e_k)
///   T4     R(i,j,k,l)   -- R(e_i, e_j, e_k, e_l)
/// All values are immutable in spirit: operations return new tensors.

using Vec4 = std::array<double, 4>;

struct Mat4 {
  std::array<double, 16> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * 4 + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * 4 + j)]; }

  static Mat4 identity();
};

struct T3 {
  std::array<double, 64> a{};

  double& operator()(int i, int j, int k) {
    return a[static_cast<std::size_t>((i * 4 + j) * 4 + k)];
  }
  double operator()(int i, int j, int k) const {
    return a[static_cast<std::size_t>((i * 4 + j) * 4 + k)];
  }
};

struct T4 {
  std::array<double, 256> a{};

  double& operator()(int i, int j, int k, int l) {
    return a[static_cast<std::size_t>(((i * 4 + j) * 4 + k) * 4 + l)];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[static_cast<std::size_t>(((i * 4 + j) * 4 + k) * 4 + l)];
  }
};

struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mat4 mat_mul(const Mat4& a, const Mat4& b);
Mat4 mat_sub(const Mat4& a, const Mat4& b);
Mat4 transpose(const Mat4& a);
double trace(const Mat4& a);

/// Gaussian elimination with partial pivoting. Throws SingularError when
/// |det| < 1e-12 * scale^4, scale being the largest absolute entry.
Mat4 mat_inverse(const Mat4& a);

Vec4 apply(const Mat4& a, const Vec4& v);

/// Lee-form contraction: alpha_k = Sum_{i,j} ginv(i,j) F(i,j,k).
Vec4 contract_lee(const T3& f, const Mat4& ginv);

/// Index lowering on the last slot: out(i,j,m) = Sum_k g(k,m) mixed(i,j,k).
T3 lower(const T3& mixed, const Mat4& g);

double inf_norm(const Vec4& v);
double inf_norm(const Mat4& m);
double inf_norm(const T3& t);
double inf_norm(const T4& t);

/// Composes a matrix into one tensor slot: e.g. slot 2 (0-based) gives
/// out(i,j,k) = Sum_a t(i,j,a) m(a,k), i.e. T(x, y, Mz).
T3 compose_slot(const T3& t, const Mat4& m, int slot);
T4 compose_slot(const T4& t, const Mat4& m, int slot);

/// out(i,j,k) = t(i,j,k) + t(j,k,i) + t(k,i,j).
T3 cyclic_sum(const T3& t);

}  // namespace circ4
