#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "circ4/circulant.hpp"
#include "circ4/tensor.hpp"
#include "support.hpp"

using circ4::Mat4;
using circ4::SingularError;
using circ4::T3;
using circ4::Vec4;
using testsupport::inverse_oracle;
using testsupport::random_well_conditioned;

namespace {

Mat4 circulant_constant(double a, double b, double c) {
  const std::array<double, 4> row{a, b, c, b};
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = row[static_cast<std::size_t>(((j - i) % 4 + 4) % 4)];
  return m;
}

}  // namespace

TEST_CASE("mat_mul: canonical Q composition") {
  const Mat4 q = circ4::canonical_q();
  const Mat4 p = circ4::mat_mul(q, q);

  // P has ones exactly at (1,3),(2,4),(3,1),(4,2) in 1-based indexing
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool expected = (i == 0 && j == 2) || (i == 1 && j == 3) ||
                            (i == 2 && j == 0) || (i == 3 && j == 1);
      CHECK(p(i, j) == (expected ? 1.0 : 0.0));
    }

  const Mat4 p2 = circ4::mat_mul(p, p);
  const Mat4 q4 = circ4::mat_mul(circ4::mat_mul(q, q), circ4::mat_mul(q, q));
  CHECK(circ4::inf_norm(circ4::mat_sub(p2, Mat4::identity())) == 0.0);
  CHECK(circ4::inf_norm(circ4::mat_sub(q4, Mat4::identity())) == 0.0);
}

TEST_CASE("canonical Q: fourth power exact, square differs from +-I, trace zero") {
  const Mat4 q = circ4::canonical_q();
  const Mat4 p = circ4::mat_mul(q, q);

  double diff_plus = 0.0, diff_minus = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      diff_plus = std::max(diff_plus, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
      diff_minus = std::max(diff_minus, std::abs(p(i, j) + (i == j ? 1.0 : 0.0)));
    }
  CHECK(diff_plus >= 1.0);
  CHECK(diff_minus >= 1.0);
  CHECK(circ4::trace(p) == 0.0);
}

TEST_CASE("mat_inverse: identity, circulant example, zero matrix") {
  const Mat4 id = Mat4::identity();
  CHECK(circ4::inf_norm(circ4::mat_sub(circ4::mat_inverse(id), id)) == 0.0);

  // circ(2,0,1,0) has eigenvalues {3,1,3,1}; its inverse is circ(2/3,0,-1/3,0)
  const Mat4 g = circulant_constant(2.0, 0.0, 1.0);
  const Mat4 expected = circulant_constant(2.0 / 3.0, 0.0, -1.0 / 3.0);
  const Mat4 inv = circ4::mat_inverse(g);
  CHECK(circ4::inf_norm(circ4::mat_sub(inv, expected)) <= 1e-12);
  CHECK(circ4::inf_norm(circ4::mat_sub(inv, inverse_oracle(g))) <= 1e-12);

  CHECK_THROWS_AS(circ4::mat_inverse(Mat4{}), SingularError);

  Mat4 rank_deficient;
  for (int j = 0; j < 4; ++j) {
    rank_deficient(0, j) = 1.0;
    rank_deficient(1, j) = 2.0;  // row 1 = 2 * row 0
    rank_deficient(2, j) = static_cast<double>(j);
    rank_deficient(3, j) = static_cast<double>(j * j);
  }
  CHECK_THROWS_AS(circ4::mat_inverse(rank_deficient), SingularError);
}

TEST_CASE("property: mat_mul associativity and inverse accuracy") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    Mat4 a, b, c;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a(i, j) = testsupport::uniform(rng, -1, 1);
        b(i, j) = testsupport::uniform(rng, -1, 1);
        c(i, j) = testsupport::uniform(rng, -1, 1);
      }
    const Mat4 l = circ4::mat_mul(circ4::mat_mul(a, b), c);
    const Mat4 r = circ4::mat_mul(a, circ4::mat_mul(b, c));
    const double scale = std::max(1.0, circ4::inf_norm(l));
    CHECK(circ4::inf_norm(circ4::mat_sub(l, r)) <= 1e-12 * scale);

    const Mat4 w = random_well_conditioned(rng);
    const Mat4 winv = circ4::mat_inverse(w);
    CHECK(circ4::inf_norm(circ4::mat_sub(circ4::mat_mul(w, winv), Mat4::identity())) <= 1e-10);
  }
}

TEST_CASE("apply: canonical Q sends e1 to e4") {
  const Vec4 e1{1, 0, 0, 0};
  const Vec4 out = circ4::apply(circ4::canonical_q(), e1);
  CHECK(out == Vec4{0, 0, 0, 1});
}

TEST_CASE("contract_lee: zeros, unit entry, brute-force oracle") {
  const Mat4 id = Mat4::identity();
  CHECK(circ4::inf_norm(circ4::contract_lee(T3{}, id)) == 0.0);

  T3 f;
  f(0, 0, 2) = 1.0;  // F[1,1,3] = 1 in 1-based indexing
  const Vec4 alpha = circ4::contract_lee(f, id);
  CHECK(alpha == Vec4{0, 0, 1, 0});

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const T3 t = testsupport::random_t3(rng);
    const Mat4 ginv = random_well_conditioned(rng);
    const Vec4 got = circ4::contract_lee(t, ginv);
    for (int k = 0; k < 4; ++k) {
      double expected = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) expected += ginv(i, j) * t(i, j, k);
      CHECK(std::abs(got[static_cast<std::size_t>(k)] - expected) <= 1e-14);
    }
  }
}

TEST_CASE("lower: zero tensor and identity metric") {
  const Mat4 id = Mat4::identity();
  CHECK(circ4::inf_norm(circ4::lower(T3{}, id)) == 0.0);

  std::mt19937_64 rng(5);
  const T3 t = testsupport::random_t3(rng);
  const T3 lowered = circ4::lower(t, id);
  for (std::size_t i = 0; i < 64; ++i) CHECK(lowered.a[i] == t.a[i]);

  // against the defining sum with a non-trivial metric
  const Mat4 g = circulant_constant(2.0, 0.0, 1.0);
  const T3 lg = circ4::lower(t, g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 4; ++m) {
        double expected = 0.0;
        for (int k = 0; k < 4; ++k) expected += g(k, m) * t(i, j, k);
        CHECK(lg(i, j, m) == doctest::Approx(expected).epsilon(1e-14));
      }
}

TEST_CASE("compose_slot and cyclic_sum against explicit loops") {
  std::mt19937_64 rng(17);
  const T3 t = testsupport::random_t3(rng);
  const Mat4 m = random_well_conditioned(rng);

  const T3 s0 = circ4::compose_slot(t, m, 0);
  const T3 s1 = circ4::compose_slot(t, m, 1);
  const T3 s2 = circ4::compose_slot(t, m, 2);
  const T3 cyc = circ4::cyclic_sum(t);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double e0 = 0.0, e1 = 0.0, e2 = 0.0;
        for (int a = 0; a < 4; ++a) {
          e0 += t(a, j, k) * m(a, i);
          e1 += t(i, a, k) * m(a, j);
          e2 += t(i, j, a) * m(a, k);
        }
        CHECK(s0(i, j, k) == doctest::Approx(e0).epsilon(1e-14));
        CHECK(s1(i, j, k) == doctest::Approx(e1).epsilon(1e-14));
        CHECK(s2(i, j, k) == doctest::Approx(e2).epsilon(1e-14));
        CHECK(cyc(i, j, k) == t(i, j, k) + t(j, k, i) + t(k, i, j));
      }
}
