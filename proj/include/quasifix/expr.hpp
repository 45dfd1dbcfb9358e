#pragma once

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quasifix {

/// Syntax error produced by Expr::parse. `offset` is the byte position in
/// the input where parsing failed; what() includes an expected-token hint.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::string msg, std::size_t off)
      : std::runtime_error(std::move(msg)), offset(off) {}
};

/// Runtime evaluation error: unbound variable or a domain violation
/// (division by zero, log of non-positive, sqrt of negative, 0^negative,
/// or any non-finite intermediate). what() names the offending
/// subexpression.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One variable binding for evaluation.
struct Binding {
  std::string_view name;
  double value;
};

/// Immutable arithmetic expression over real variables.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ("-")? power
///   power  := atom ("^" factor)?          (right-associative)
///   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
///
/// Built-in calls: min, max (two or more arguments), abs, sqrt, exp, log.
/// Unary minus binds tighter than the base of "^": "-x^2" is -(x^2).
/// All arithmetic is IEEE double; "^" is real power.
class Expr {
 public:
  /// Parses `text`; throws ParseError on malformed input.
  static Expr parse(std::string_view text);

  /// Evaluates with the given bindings. Throws EvalError on an unbound
  /// variable or a domain violation; never returns a non-finite value.
  double eval(std::span<const Binding> bindings) const;
  double eval(std::initializer_list<Binding> bindings) const {
    return eval(std::span<const Binding>(bindings.begin(), bindings.size()));
  }
  double eval() const { return eval(std::span<const Binding>{}); }

  const std::set<std::string>& free_vars() const { return *free_vars_; }
  const std::string& text() const { return *text_; }

  /// Structural equality (same tree shape, operators, names, literals).
  bool operator==(const Expr& other) const;

  struct Node;
  const Node& root() const { return *root_; }

 private:
  Expr() = default;
  std::shared_ptr<const Node> root_;
  std::shared_ptr<const std::string> text_;
  std::shared_ptr<const std::set<std::string>> free_vars_;
};

/// Adapter: expression of one fixed variable as a callable.
class UnaryFn {
 public:
  UnaryFn(Expr expr, std::string var)
      : expr_(std::move(expr)), var_(std::move(var)) {}
  double operator()(double x) const {
    const Binding b[1] = {{var_, x}};
    return expr_.eval(std::span<const Binding>(b, 1));
  }
  const Expr& expr() const { return expr_; }
  const std::string& var() const { return var_; }

 private:
  Expr expr_;
  std::string var_;
};

/// Adapter: expression of two fixed variables as a callable.
class BinaryFn {
 public:
  BinaryFn(Expr expr, std::string var_a, std::string var_b)
      : expr_(std::move(expr)), var_a_(std::move(var_a)), var_b_(std::move(var_b)) {}
  double operator()(double a, double b) const {
    const Binding bs[2] = {{var_a_, a}, {var_b_, b}};
    return expr_.eval(std::span<const Binding>(bs, 2));
  }
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
  std::string var_a_, var_b_;
};

}  // namespace quasifix
