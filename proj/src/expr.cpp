#include "circ4/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace circ4 {

struct ExprNode {
  ExprKind kind;
  double value = 0.0;                 // Constant payload
  int var = 0;                        // Variable payload, 1..4
  std::shared_ptr<const ExprNode> a;  // first child (null for leaves)
  std::shared_ptr<const ExprNode> b;  // second child (null for leaves and unary ops)
};

ParseError::ParseError(std::size_t pos, const std::string& message)
    : std::runtime_error(message + " (at offset " + std::to_string(pos) + ")"),
      position(pos) {}

Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const std::shared_ptr<const ExprNode> zero =
      std::make_shared<const ExprNode>(ExprNode{ExprKind::Constant, 0.0, 0, nullptr, nullptr});
  node_ = zero;
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->var; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }

bool Expr::is_constant() const { return node_->kind == ExprKind::Constant; }
bool Expr::is_constant(double value) const {
  return is_constant() && node_->value == value;
}

Expr Expr::constant(double value) {
  if (value == 0.0) return Expr();  // shares the zero node
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Constant, value, 0, nullptr, nullptr}));
}

Expr Expr::variable(int index) {
  if (index < 1 || index > 4)
    throw std::invalid_argument("variable index must be in 1..4");
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Variable, 0.0, index, nullptr, nullptr}));
}

Expr Expr::neg(Expr e) {
  if (e.is_constant()) return constant(-e.constant_value());
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Neg, 0.0, 0, std::move(e.node_), nullptr}));
}

// Unary functions fold a constant argument only when the result is finite;
// domain violations stay in the tree and surface at evaluation.

Expr Expr::sin(Expr e) {
  if (e.is_constant()) {
    const double v = std::sin(e.constant_value());
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Sin, 0.0, 0, std::move(e.node_), nullptr}));
}

Expr Expr::cos(Expr e) {
  if (e.is_constant()) {
    const double v = std::cos(e.constant_value());
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Cos, 0.0, 0, std::move(e.node_), nullptr}));
}

Expr Expr::exp(Expr e) {
  if (e.is_constant()) {
    const double v = std::exp(e.constant_value());
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Exp, 0.0, 0, std::move(e.node_), nullptr}));
}

Expr Expr::log(Expr e) {
  if (e.is_constant() && e.constant_value() > 0.0) {
    const double v = std::log(e.constant_value());
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Log, 0.0, 0, std::move(e.node_), nullptr}));
}

Expr Expr::sqrt(Expr e) {
  if (e.is_constant() && e.constant_value() >= 0.0) {
    const double v = std::sqrt(e.constant_value());
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Sqrt, 0.0, 0, std::move(e.node_), nullptr}));
}

Expr Expr::add(Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant())
    return constant(lhs.constant_value() + rhs.constant_value());
  if (lhs.is_constant(0.0)) return rhs;
  if (rhs.is_constant(0.0)) return lhs;
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Add, 0.0, 0, std::move(lhs.node_), std::move(rhs.node_)}));
}

Expr Expr::sub(Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant())
    return constant(lhs.constant_value() - rhs.constant_value());
  if (rhs.is_constant(0.0)) return lhs;
  if (lhs.is_constant(0.0)) return neg(std::move(rhs));
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Sub, 0.0, 0, std::move(lhs.node_), std::move(rhs.node_)}));
}

Expr Expr::mul(Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant())
    return constant(lhs.constant_value() * rhs.constant_value());
  if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
  if (lhs.is_constant(1.0)) return rhs;
  if (rhs.is_constant(1.0)) return lhs;
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Mul, 0.0, 0, std::move(lhs.node_), std::move(rhs.node_)}));
}

Expr Expr::div(Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant() && rhs.constant_value() != 0.0) {
    const double v = lhs.constant_value() / rhs.constant_value();
    if (std::isfinite(v)) return constant(v);
  }
  if (rhs.is_constant(1.0)) return lhs;
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Div, 0.0, 0, std::move(lhs.node_), std::move(rhs.node_)}));
}

Expr Expr::pow(Expr base, Expr exponent) {
  if (!exponent.is_constant())
    throw std::invalid_argument("pow exponent must be a constant");
  const double c = exponent.constant_value();
  if (c == 0.0) return constant(1.0);
  if (c == 1.0) return base;
  if (base.is_constant()) {
    const double v = std::pow(base.constant_value(), c);
    if (std::isfinite(v)) return constant(v);
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprKind::Pow, 0.0, 0, std::move(base.node_), std::move(exponent.node_)}));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(0, "empty expression");
    Expr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        e = Expr::add(std::move(e), parse_term());
      } else if (c == '-') {
        ++pos_;
        e = Expr::sub(std::move(e), parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        e = Expr::mul(std::move(e), parse_unary());
      } else if (c == '/') {
        ++pos_;
        e = Expr::div(std::move(e), parse_unary());
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (peek() == '-') {
      ++pos_;
      return Expr::neg(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t exp_pos = pos_;
      Expr exponent = parse_unary();  // right-associative; allows x^-2
      if (!exponent.is_constant())
        throw ParseError(exp_pos, "exponent must be a constant");
      return Expr::pow(std::move(base), std::move(exponent));
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (peek() != ')') throw ParseError(std::min(pos_, text_.size()), "expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError(start, "malformed number");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
      throw ParseError(start, "malformed number");
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "sin" || name == "cos" || name == "exp" || name == "log" || name == "sqrt") {
      if (peek() != '(')
        throw ParseError(std::min(pos_, text_.size()),
                         "expected '(' after function name");
      ++pos_;
      Expr arg = parse_sum();
      if (peek() != ')') throw ParseError(std::min(pos_, text_.size()), "expected ')'");
      ++pos_;
      if (name == "sin") return Expr::sin(std::move(arg));
      if (name == "cos") return Expr::cos(std::move(arg));
      if (name == "exp") return Expr::exp(std::move(arg));
      if (name == "log") return Expr::log(std::move(arg));
      return Expr::sqrt(std::move(arg));
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4')
      return Expr::variable(name[1] - '0');
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, int coord) {
  if (coord < 1 || coord > 4)
    throw std::invalid_argument("coordinate index must be in 1..4");
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(0.0);
    case ExprKind::Variable:
      return Expr::constant(e.variable_index() == coord ? 1.0 : 0.0);
    case ExprKind::Neg:
      return Expr::neg(differentiate(e.lhs(), coord));
    case ExprKind::Sin:
      return Expr::mul(Expr::cos(e.lhs()), differentiate(e.lhs(), coord));
    case ExprKind::Cos:
      return Expr::mul(Expr::neg(Expr::sin(e.lhs())), differentiate(e.lhs(), coord));
    case ExprKind::Exp:
      return Expr::mul(Expr::exp(e.lhs()), differentiate(e.lhs(), coord));
    case ExprKind::Log:
      return Expr::div(differentiate(e.lhs(), coord), e.lhs());
    case ExprKind::Sqrt:
      return Expr::div(differentiate(e.lhs(), coord),
                       Expr::mul(Expr::constant(2.0), Expr::sqrt(e.lhs())));
    case ExprKind::Add:
      return Expr::add(differentiate(e.lhs(), coord), differentiate(e.rhs(), coord));
    case ExprKind::Sub:
      return Expr::sub(differentiate(e.lhs(), coord), differentiate(e.rhs(), coord));
    case ExprKind::Mul:
      return Expr::add(Expr::mul(differentiate(e.lhs(), coord), e.rhs()),
                       Expr::mul(e.lhs(), differentiate(e.rhs(), coord)));
    case ExprKind::Div:
      return Expr::div(
          Expr::sub(Expr::mul(differentiate(e.lhs(), coord), e.rhs()),
                    Expr::mul(e.lhs(), differentiate(e.rhs(), coord))),
          Expr::mul(e.rhs(), e.rhs()));
    case ExprKind::Pow: {
      // d(u^c) = c * u^(c-1) * du, with constant exponent c
      const double c = e.rhs().constant_value();
      return Expr::mul(
          Expr::mul(Expr::constant(c), Expr::pow(e.lhs(), Expr::constant(c - 1.0))),
          differentiate(e.lhs(), coord));
    }
  }
  throw std::logic_error("unhandled expression kind");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double check_finite(double v) {
  if (!std::isfinite(v)) throw EvalError("non-finite value in evaluation");
  return v;
}

}  // namespace

double evaluate(const Expr& e, const std::array<double, 4>& p) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.constant_value();
    case ExprKind::Variable:
      return check_finite(p[static_cast<std::size_t>(e.variable_index() - 1)]);
    case ExprKind::Neg:
      return -evaluate(e.lhs(), p);
    case ExprKind::Sin:
      return check_finite(std::sin(evaluate(e.lhs(), p)));
    case ExprKind::Cos:
      return check_finite(std::cos(evaluate(e.lhs(), p)));
    case ExprKind::Exp:
      return check_finite(std::exp(evaluate(e.lhs(), p)));
    case ExprKind::Log: {
      const double v = evaluate(e.lhs(), p);
      if (v <= 0.0) throw EvalError("log of a non-positive value");
      return check_finite(std::log(v));
    }
    case ExprKind::Sqrt: {
      const double v = evaluate(e.lhs(), p);
      if (v < 0.0) throw EvalError("sqrt of a negative value");
      return check_finite(std::sqrt(v));
    }
    case ExprKind::Add:
      return check_finite(evaluate(e.lhs(), p) + evaluate(e.rhs(), p));
    case ExprKind::Sub:
      return check_finite(evaluate(e.lhs(), p) - evaluate(e.rhs(), p));
    case ExprKind::Mul:
      return check_finite(evaluate(e.lhs(), p) * evaluate(e.rhs(), p));
    case ExprKind::Div: {
      const double denom = evaluate(e.rhs(), p);
      if (denom == 0.0) throw EvalError("division by zero");
      return check_finite(evaluate(e.lhs(), p) / denom);
    }
    case ExprKind::Pow:
      return check_finite(std::pow(evaluate(e.lhs(), p), e.rhs().constant_value()));
  }
  throw std::logic_error("unhandled expression kind");
}

// ---------------------------------------------------------------------------
// Printing and comparison

namespace {

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string number_to_string(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// `parenthesize_negative` wraps negative literals so that e.g. (-2)*x1
// re-parses with the constant inside the product, not a top-level negation.
void print(const Expr& e, std::string& out, bool parenthesize_negative) {
  const ExprKind k = e.kind();
  switch (k) {
    case ExprKind::Constant: {
      const bool wrap = parenthesize_negative && std::signbit(e.constant_value());
      if (wrap) out += '(';
      out += number_to_string(e.constant_value());
      if (wrap) out += ')';
      return;
    }
    case ExprKind::Variable:
      out += 'x';
      out += static_cast<char>('0' + e.variable_index());
      return;
    case ExprKind::Neg: {
      out += '-';
      const bool wrap = precedence(e.lhs().kind()) < precedence(k);
      if (wrap) out += '(';
      print(e.lhs(), out, !wrap);
      if (wrap) out += ')';
      return;
    }
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Sqrt: {
      switch (k) {
        case ExprKind::Sin: out += "sin("; break;
        case ExprKind::Cos: out += "cos("; break;
        case ExprKind::Exp: out += "exp("; break;
        case ExprKind::Log: out += "log("; break;
        default: out += "sqrt("; break;
      }
      print(e.lhs(), out, false);
      out += ')';
      return;
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow: {
      const int prec = precedence(k);
      const char op = k == ExprKind::Add   ? '+'
                      : k == ExprKind::Sub ? '-'
                      : k == ExprKind::Mul ? '*'
                      : k == ExprKind::Div ? '/'
                                           : '^';
      // Left-assoc ops keep a same-precedence right child parenthesized so
      // the tree shape survives a round trip; pow is the mirror case.
      const bool lwrap = precedence(e.lhs().kind()) < prec ||
                         (k == ExprKind::Pow && precedence(e.lhs().kind()) == prec);
      const bool rwrap = precedence(e.rhs().kind()) < prec ||
                         (k != ExprKind::Pow && precedence(e.rhs().kind()) == prec);
      if (lwrap) out += '(';
      print(e.lhs(), out, !lwrap);
      if (lwrap) out += ')';
      out += op;
      if (rwrap) out += '(';
      print(e.rhs(), out, !rwrap);
      if (rwrap) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, false);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Constant:
      return a.constant_value() == b.constant_value();
    case ExprKind::Variable:
      return a.variable_index() == b.variable_index();
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Sqrt:
      return structurally_equal(a.lhs(), b.lhs());
    default:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  }
}

}  // namespace circ4
