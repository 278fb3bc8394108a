#pragma once

/**
 * @file expr.hpp
 * @brief Single-variable expression language with second-order jets.
 *
 * Grammar (whitespace ignored):
 *
 *     expr   := term (('+' | '-') term)*
 *     term   := factor (('*' | '/') factor)*
 *     factor := unary ('^' factor)?          right-associative
 *     unary  := '-' unary | atom
 *     atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
 *     func   := sin | cos | exp | ln | sqrt | abs
 *
 * Unary minus binds tighter than '^', so "-x^2" is (-x)^2.
 *
 * eval_jet2 propagates (f, f', f'') through the tree with the second-order
 * chain rule, so f'' is exact up to rounding rather than a difference quotient.
 */

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "glbound/error.hpp"

namespace glbound {

enum class Func { Sin, Cos, Exp, Ln, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

constexpr std::string_view to_string(Func f) noexcept {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

constexpr char to_char(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

struct Node;

// Immutable, shareable expression tree handle.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable();
  static Expr negate(Expr arg);
  static Expr call(Func func, Expr arg);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  const Node& node() const noexcept { return *node_; }
  // True when the subtree mentions the variable x.
  bool depends_on_x() const noexcept;

  friend bool operator==(const Expr& lhs, const Expr& rhs);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Constant {
  double value;
};
struct Variable {};
struct Negate {
  Expr arg;
};
struct Call {
  Func func;
  Expr arg;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};

struct Node {
  std::variant<Constant, Variable, Negate, Call, Binary> kind;
  bool has_x = false;
};

inline Expr Expr::constant(double value) {
  return Expr(std::make_shared<const Node>(Node{Constant{value}, false}));
}
inline Expr Expr::variable() {
  return Expr(std::make_shared<const Node>(Node{Variable{}, true}));
}
inline Expr Expr::negate(Expr arg) {
  const bool has_x = arg.depends_on_x();
  return Expr(std::make_shared<const Node>(Node{Negate{std::move(arg)}, has_x}));
}
inline Expr Expr::call(Func func, Expr arg) {
  const bool has_x = arg.depends_on_x();
  return Expr(std::make_shared<const Node>(Node{Call{func, std::move(arg)}, has_x}));
}
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  const bool has_x = lhs.depends_on_x() || rhs.depends_on_x();
  return Expr(std::make_shared<const Node>(
      Node{Binary{op, std::move(lhs), std::move(rhs)}, has_x}));
}
inline bool Expr::depends_on_x() const noexcept { return node_->has_x; }

inline bool operator==(const Expr& lhs, const Expr& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  const auto& l = lhs.node().kind;
  const auto& r = rhs.node().kind;
  if (l.index() != r.index()) return false;
  if (const auto* c = std::get_if<Constant>(&l)) return c->value == std::get<Constant>(r).value;
  if (std::holds_alternative<Variable>(l)) return true;
  if (const auto* n = std::get_if<Negate>(&l)) return n->arg == std::get<Negate>(r).arg;
  if (const auto* c = std::get_if<Call>(&l)) {
    const auto& o = std::get<Call>(r);
    return c->func == o.func && c->arg == o.arg;
  }
  const auto& b = std::get<Binary>(l);
  const auto& o = std::get<Binary>(r);
  return b.op == o.op && b.lhs == o.lhs && b.rhs == o.rhs;
}

// Value, first and second derivative at a point.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(ErrorKind::Syntax, pos_, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? std::string("expected '") + c + "', found '" + text_[pos_] + "'"
                               : std::string("expected '") + c + "' before end of input");
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), parse_factor());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_unary();
    if (accept('^')) return Expr::binary(BinaryOp::Pow, std::move(base), parse_factor());
    return base;
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_atom();
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ == text_.size() || !is_digit(text_[pos_])) fail("malformed exponent");
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      throw SyntaxError(ErrorKind::Syntax, start, "number out of range");
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_ident_start(text_[pos_]) || is_digit(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();

    static constexpr Func kFuncs[] = {Func::Sin,  Func::Cos,  Func::Exp,
                                      Func::Ln,   Func::Sqrt, Func::Abs};
    for (Func f : kFuncs) {
      if (name == to_string(f)) {
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return Expr::call(f, std::move(arg));
      }
    }
    throw SyntaxError(ErrorKind::UnknownIdentifier, start,
                      "unknown identifier '" + std::string(name) + "'");
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string format_constant(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Fully parenthesised rendering; parse(to_string(e)) == e.
inline std::string to_string(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return format_constant(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return "x";
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "-(" + to_string(n.arg) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          return std::string(to_string(n.func)) + "(" + to_string(n.arg) + ")";
        } else {
          return "(" + to_string(n.lhs) + to_char(n.op) + to_string(n.rhs) + ")";
        }
      },
      e.node().kind);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_integer(double w) { return std::isfinite(w) && w == std::nearbyint(w); }

inline double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what);
  return v;
}

inline double checked_pow(double u, double w) {
  if (u == 0.0 && w < 0.0) throw Error(ErrorKind::Domain, "0 raised to a negative power");
  if (u < 0.0 && !is_integer(w)) {
    throw Error(ErrorKind::Domain, "negative base with non-integer exponent");
  }
  return finite_or_throw(std::pow(u, w), "overflow in '^'");
}

inline double apply(Func f, double u) {
  switch (f) {
    case Func::Sin: return std::sin(u);
    case Func::Cos: return std::cos(u);
    case Func::Exp: return finite_or_throw(std::exp(u), "overflow in exp");
    case Func::Ln:
      if (!(u > 0.0)) throw Error(ErrorKind::Domain, "ln of non-positive argument");
      return std::log(u);
    case Func::Sqrt:
      if (u < 0.0) throw Error(ErrorKind::Domain, "sqrt of negative argument");
      return std::sqrt(u);
    case Func::Abs: return std::abs(u);
  }
  return 0.0;
}

inline double divide(double u, double w) {
  if (w == 0.0) throw Error(ErrorKind::DivisionByZero, "denominator is zero");
  return finite_or_throw(u / w, "overflow in '/'");
}

// Chain rule through a scalar h with h(u), h'(u), h''(u) known.
inline Jet2 compose(double value, double dh, double ddh, const Jet2& u) {
  return {value, dh * u.d1, ddh * u.d1 * u.d1 + dh * u.d2};
}

inline Jet2 jet_call(Func f, const Jet2& u) {
  const double value = apply(f, u.v);
  switch (f) {
    case Func::Sin: return compose(value, std::cos(u.v), -value, u);
    case Func::Cos: return compose(value, -std::sin(u.v), -value, u);
    case Func::Exp: return compose(value, value, value, u);
    case Func::Ln: return compose(value, 1.0 / u.v, -1.0 / (u.v * u.v), u);
    case Func::Sqrt:
      if (u.v == 0.0) throw Error(ErrorKind::NonSmooth, "sqrt is not differentiable at 0");
      return compose(value, 0.5 / value, -0.25 / (value * u.v), u);
    case Func::Abs:
      if (u.v == 0.0) throw Error(ErrorKind::NonSmooth, "abs is not differentiable at 0");
      return compose(value, u.v > 0.0 ? 1.0 : -1.0, 0.0, u);
  }
  return {};
}

// u^p for an exponent p that does not depend on x.
inline Jet2 jet_pow_const(const Jet2& u, double p) {
  const double value = checked_pow(u.v, p);
  if (u.v == 0.0 && !is_integer(p) && p < 2.0) {
    throw Error(ErrorKind::NonSmooth, "x^p with 0 < p < 2 is not twice differentiable at 0");
  }
  // Terms with a zero coefficient are dropped so that 0^(p-2) never meets 0.
  const double c1 = p;
  const double c2 = p * (p - 1.0);
  const double dh = c1 == 0.0 ? 0.0 : c1 * std::pow(u.v, p - 1.0);
  const double ddh = c2 == 0.0 ? 0.0 : c2 * std::pow(u.v, p - 2.0);
  return compose(value, dh, ddh, u);
}

// u^w with x-dependent exponent: d/dx = u^w * (w ln u)'.
inline Jet2 jet_pow_var(const Jet2& u, const Jet2& w) {
  if (u.v == 0.0) {
    throw Error(ErrorKind::NonSmooth, "variable exponent with zero base");
  }
  if (u.v < 0.0) throw Error(ErrorKind::Domain, "variable exponent requires positive base");
  const double value = checked_pow(u.v, w.v);
  const double ln_u = std::log(u.v);
  const double l1 = u.d1 / u.v;
  const double l2 = u.d2 / u.v - l1 * l1;
  const double h1 = w.d1 * ln_u + w.v * l1;
  const double h2 = w.d2 * ln_u + 2.0 * w.d1 * l1 + w.v * l2;
  return {value, value * h1, value * (h2 + h1 * h1)};
}

inline void check_jet(const Jet2& j) {
  if (!std::isfinite(j.v) || !std::isfinite(j.d1) || !std::isfinite(j.d2)) {
    throw Error(ErrorKind::NonFinite, "derivative overflow");
  }
}

}  // namespace detail

/// Plain recursive evaluation at x.
inline double eval(const Expr& e, double x) {
  return std::visit(
      [x](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval(n.arg, x);
        } else if constexpr (std::is_same_v<T, Call>) {
          return detail::apply(n.func, eval(n.arg, x));
        } else {
          const double u = eval(n.lhs, x);
          const double w = eval(n.rhs, x);
          switch (n.op) {
            case BinaryOp::Add: return detail::finite_or_throw(u + w, "overflow in '+'");
            case BinaryOp::Sub: return detail::finite_or_throw(u - w, "overflow in '-'");
            case BinaryOp::Mul: return detail::finite_or_throw(u * w, "overflow in '*'");
            case BinaryOp::Div: return detail::divide(u, w);
            case BinaryOp::Pow: return detail::checked_pow(u, w);
          }
          return 0.0;
        }
      },
      e.node().kind);
}

/// (f(x), f'(x), f''(x)) by second-order forward propagation. The value
/// component is computed with the same operations as eval.
inline Jet2 eval_jet2(const Expr& e, double x) {
  Jet2 out = std::visit(
      [x](const auto& n) -> Jet2 {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return {n.value, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Variable>) {
          return {x, 1.0, 0.0};
        } else if constexpr (std::is_same_v<T, Negate>) {
          const Jet2 u = eval_jet2(n.arg, x);
          return {-u.v, -u.d1, -u.d2};
        } else if constexpr (std::is_same_v<T, Call>) {
          return detail::jet_call(n.func, eval_jet2(n.arg, x));
        } else {
          const Jet2 u = eval_jet2(n.lhs, x);
          const Jet2 w = eval_jet2(n.rhs, x);
          switch (n.op) {
            case BinaryOp::Add:
              return {detail::finite_or_throw(u.v + w.v, "overflow in '+'"), u.d1 + w.d1,
                      u.d2 + w.d2};
            case BinaryOp::Sub:
              return {detail::finite_or_throw(u.v - w.v, "overflow in '-'"), u.d1 - w.d1,
                      u.d2 - w.d2};
            case BinaryOp::Mul:
              return {detail::finite_or_throw(u.v * w.v, "overflow in '*'"),
                      u.d1 * w.v + u.v * w.d1, u.d2 * w.v + 2.0 * u.d1 * w.d1 + u.v * w.d2};
            case BinaryOp::Div: {
              const double q = detail::divide(u.v, w.v);
              const double q1 = (u.d1 - q * w.d1) / w.v;
              const double q2 = (u.d2 - 2.0 * q1 * w.d1 - q * w.d2) / w.v;
              return {q, q1, q2};
            }
            case BinaryOp::Pow:
              return n.rhs.depends_on_x() ? detail::jet_pow_var(u, w)
                                          : detail::jet_pow_const(u, w.v);
          }
          return {};
        }
      },
      e.node().kind);
  detail::check_jet(out);
  return out;
}

}  // namespace glbound
