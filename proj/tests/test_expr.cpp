#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "circ4/expr.hpp"
#include "support.hpp"

using circ4::EvalError;
using circ4::Expr;
using circ4::ExprKind;
using circ4::ParseError;
using testsupport::central_difference;
using testsupport::random_point;
using testsupport::random_polynomial;
using testsupport::random_smooth;

namespace {

std::size_t parse_error_position(const std::string& text) {
  try {
    circ4::parse(text);
  } catch (const ParseError& e) {
    return e.position;
  }
  FAIL("expected ParseError for: ", text);
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("parse: literals, variables, grammar shape") {
  CHECK(circ4::parse("0").is_constant(0.0));
  CHECK(circ4::parse("3.5").is_constant(3.5));
  CHECK(circ4::parse("2.5e-3").is_constant(2.5e-3));
  CHECK(circ4::parse("1E+2").is_constant(100.0));

  const Expr e = circ4::parse("x1^2 + sin(x2)");
  const Expr expected = Expr::add(Expr::pow(Expr::variable(1), Expr::constant(2.0)),
                                  Expr::sin(Expr::variable(2)));
  CHECK(circ4::structurally_equal(e, expected));

  // precedence and associativity
  CHECK(circ4::structurally_equal(
      circ4::parse("x1 - x2 - x3"),
      Expr::sub(Expr::sub(Expr::variable(1), Expr::variable(2)), Expr::variable(3))));
  CHECK(circ4::structurally_equal(
      circ4::parse("x1 + x2*x3"),
      Expr::add(Expr::variable(1), Expr::mul(Expr::variable(2), Expr::variable(3)))));
  // ^ binds tighter than unary minus
  CHECK(circ4::evaluate(circ4::parse("-x1^2"), {3, 0, 0, 0}) == -9.0);
  // ^ is right-associative: 2^3^2 = 2^9
  CHECK(circ4::parse("2^3^2").is_constant(512.0));
}

TEST_CASE("parse: errors carry positions inside the input") {
  CHECK(parse_error_position("x5 + 1") == 0);
  CHECK(parse_error_position("x1 + y2") == 5);
  CHECK(parse_error_position("") == 0);
  CHECK(parse_error_position("   ") == 0);
  CHECK(parse_error_position("(x1 + x2") == 8);
  CHECK(parse_error_position("x1 + ") == 5);
  CHECK(parse_error_position("1e+") == 0);
  CHECK(parse_error_position("x1 ^ x2") == 5);  // variable exponent rejected
  CHECK(parse_error_position("sin x1") == 4);
  CHECK(parse_error_position("x1 $ x2") == 3);

  try {
    circ4::parse("x1 + (x2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position <= std::string("x1 + (x2").size());
  }
}

TEST_CASE("differentiate: textbook rules with folding") {
  const Expr x1sq = circ4::parse("x1^2");
  CHECK(circ4::structurally_equal(circ4::differentiate(x1sq, 1),
                                  Expr::mul(Expr::constant(2.0), Expr::variable(1))));
  CHECK(circ4::differentiate(circ4::parse("sin(x2)"), 1).is_constant(0.0));
  CHECK(circ4::evaluate(circ4::differentiate(circ4::parse("x1*x2"), 2), {5, 7, 0, 0}) == 5.0);

  // frozen from the finite-difference oracle: d/dx1 exp(2 x1) at 0 is 2
  const Expr e = circ4::parse("exp(2*x1)");
  const double symbolic = circ4::evaluate(circ4::differentiate(e, 1), {0, 0, 0, 0});
  CHECK(std::abs(symbolic - 2.0) <= 1e-8);
  const double fd = central_difference(e, 1, {0, 0, 0, 0}, 1e-5);
  CHECK(std::abs(symbolic - fd) <= 1e-8);
}

TEST_CASE("differentiate: quotient, sqrt, log chains") {
  std::mt19937_64 rng(7);
  const Expr e = circ4::parse("log(2 + x1^2) / sqrt(1 + x2^2) + x3/x4");
  for (int i = 0; i < 50; ++i) {
    circ4::Vec4 p = random_point(rng, 0.5, 2.0);
    for (int k = 1; k <= 4; ++k) {
      const double sym = circ4::evaluate(circ4::differentiate(e, k), p);
      const double fd = central_difference(e, k, p, 1e-5);
      CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(sym)));
    }
  }
}

TEST_CASE("property: symbolic derivative matches central differences") {
  std::mt19937_64 rng(42);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e = random_polynomial(rng, 4);
    const circ4::Vec4 p = random_point(rng);
    for (int k = 1; k <= 4; ++k) {
      const double value = circ4::evaluate(e, p);
      const double sym = circ4::evaluate(circ4::differentiate(e, k), p);
      const double fd = central_difference(e, k, p, 1e-5);
      // loose guard against FD cancellation on large values
      if (std::abs(value) > 1e3 || std::abs(sym) > 1e3) continue;
      CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(sym)));
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("property: parse/unparse round trip is structurally exact") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Expr e = i % 2 == 0 ? random_polynomial(rng, 4) : random_smooth(rng, 4);
    const Expr reparsed = circ4::parse(circ4::to_string(e));
    CHECK(circ4::structurally_equal(e, reparsed));
  }
  for (const char* text : {"x1^2 + sin(x2)", "-(x1 + x2)*x3", "x1 - (x2 - x3)",
                           "x1/x2/x3", "x1^-2", "2*-x1", "sqrt(x1)*log(x2)"}) {
    const Expr once = circ4::parse(text);
    CHECK(circ4::structurally_equal(once, circ4::parse(circ4::to_string(once))));
  }
}

TEST_CASE("property: derivative of a constant folds to the zero constant") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Expr c = Expr::constant(testsupport::uniform(rng, -10.0, 10.0));
    for (int k = 1; k <= 4; ++k) CHECK(circ4::differentiate(c, k).is_constant(0.0));
  }
  // folded composites too
  CHECK(circ4::differentiate(circ4::parse("3*4 + sin(1)"), 2).is_constant(0.0));
}

TEST_CASE("evaluate: examples and domain violations") {
  CHECK(circ4::evaluate(circ4::parse("x1 + x3"), {1, 0, 2, 0}) == 3.0);
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("log(x1)"), {0, 1, 1, 1}), EvalError);
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("log(x1)"), {-1, 1, 1, 1}), EvalError);
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("sqrt(x1)"), {-4, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("x1 / x2"), {1, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("exp(x1)"), {1e6, 0, 0, 0}), EvalError);
  CHECK(circ4::evaluate(circ4::parse("sqrt(x1)"), {4, 0, 0, 0}) == 2.0);
}

TEST_CASE("constant folding: only the sanctioned rules") {
  CHECK(circ4::parse("x1 + 0").kind() == ExprKind::Variable);
  CHECK(circ4::parse("0 + x1").kind() == ExprKind::Variable);
  CHECK(circ4::parse("x1 * 1").kind() == ExprKind::Variable);
  CHECK(circ4::parse("x1 * 0").is_constant(0.0));
  CHECK(circ4::parse("2 + 3*4").is_constant(14.0));
  CHECK(circ4::parse("x1^0").is_constant(1.0));
  CHECK(circ4::parse("x1^1").kind() == ExprKind::Variable);
  // x1 - x1 is NOT folded (no general simplifier)
  CHECK(circ4::parse("x1 - x1").kind() == ExprKind::Sub);
  // division by a constant zero survives to evaluation
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("1/0"), {0, 0, 0, 0}), EvalError);
  // log(-1) stays symbolic and fails at evaluation, not at parse
  CHECK_THROWS_AS(circ4::evaluate(circ4::parse("log(0-1)"), {0, 0, 0, 0}), EvalError);
}

TEST_CASE("pow exponent restriction is enforced in the API too") {
  CHECK_THROWS_AS(Expr::pow(Expr::variable(1), Expr::variable(2)), std::invalid_argument);
  CHECK_THROWS_AS(Expr::variable(5), std::invalid_argument);
  CHECK_THROWS_AS(circ4::differentiate(Expr::variable(1), 0), std::invalid_argument);
  CHECK_THROWS_AS(circ4::differentiate(Expr::variable(1), 5), std::invalid_argument);
}
