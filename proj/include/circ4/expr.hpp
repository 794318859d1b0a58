#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace circ4 {

/// Scalar-field expressions over the chart coordinates x1..x4.
///
/// Trees are immutable after construction and shared by reference count,
/// so they can be evaluated concurrently from any number of threads.
/// The factory functions apply constant folding (operations on constants,
/// x+0, x*1, x*0) and nothing more; there is no general simplifier.

enum class ExprKind : unsigned char {
  Constant,
  Variable,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct ExprNode;

struct ParseError : std::runtime_error {
  ParseError(std::size_t position, const std::string& message);
  std::size_t position;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Expr {
 public:
  /// Default-constructs the constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(int index);  // index in 1..4

  static Expr neg(Expr e);
  static Expr sin(Expr e);
  static Expr cos(Expr e);
  static Expr exp(Expr e);
  static Expr log(Expr e);
  static Expr sqrt(Expr e);

  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  /// `exponent` must be (or fold to) a constant; throws std::invalid_argument otherwise.
  static Expr pow(Expr base, Expr exponent);

  ExprKind kind() const;
  double constant_value() const;  // valid for Constant nodes
  int variable_index() const;     // valid for Variable nodes
  Expr lhs() const;               // first child of unary/binary nodes
  Expr rhs() const;               // second child of binary nodes

  bool is_constant() const;
  bool is_constant(double value) const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node);
  std::shared_ptr<const ExprNode> node_;
};

/// Parses an expression under the grammar: `^` (right-assoc) > unary minus
/// > `*` `/` > `+` `-`, all left-associative, with parentheses, function
/// calls sin/cos/exp/log/sqrt, variables x1..x4, and decimal literals with
/// optional exponent. Throws ParseError with a byte offset into `text`.
Expr parse(std::string_view text);

/// Exact symbolic partial derivative with respect to x_coord (coord in 1..4).
Expr differentiate(const Expr& e, int coord);

/// Evaluates at a point; throws EvalError on domain violations (log of a
/// non-positive value, sqrt of a negative value, division by zero) and on
/// non-finite intermediate results.
double evaluate(const Expr& e, const std::array<double, 4>& p);

std::string to_string(const Expr& e);

/// Node-by-node equality of the two trees.
bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace circ4
