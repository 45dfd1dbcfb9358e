#include "quasifix/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>

namespace quasifix {

struct Expr::Node {
  enum class Kind : std::uint8_t { number, var, neg, add, sub, mul, div, pow, call };

  Kind kind;
  double number = 0.0;
  std::string name;         // variable or function name
  std::vector<Node> args;   // children
  std::uint32_t begin = 0;  // source span [begin, end)
  std::uint32_t end = 0;
};

namespace {

using Node = Expr::Node;
using Kind = Node::Kind;

struct FnInfo {
  const char* name;
  int min_args;
  int max_args;  // -1 = unbounded
};

constexpr FnInfo kFunctions[] = {
    {"min", 2, -1}, {"max", 2, -1}, {"abs", 1, 1},
    {"sqrt", 1, 1}, {"exp", 1, 1},  {"log", 1, 1},
};

const FnInfo* lookup_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (name == f.name) return &f;
  return nullptr;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Node run() {
    if (text_.empty()) throw ParseError("empty expression", 0);
    Node n = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input; expected operator or end of input");
    return n;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " + msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node parse_expr() {
    Node lhs = parse_term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Node rhs = parse_term();
      lhs = make_binary(c == '+' ? Kind::add : Kind::sub, std::move(lhs), std::move(rhs));
    }
  }

  Node parse_term() {
    Node lhs = parse_factor();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Node rhs = parse_factor();
      lhs = make_binary(c == '*' ? Kind::mul : Kind::div, std::move(lhs), std::move(rhs));
    }
  }

  Node parse_factor() {
    if (peek() == '-') {
      auto start = static_cast<std::uint32_t>(pos_);
      ++pos_;
      Node inner = parse_power();
      Node n;
      n.kind = Kind::neg;
      n.begin = start;
      n.end = inner.end;
      n.args.push_back(std::move(inner));
      return n;
    }
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      Node exponent = parse_factor();  // right-associative
      return make_binary(Kind::pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  Node parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected number, identifier, or '('");
    char c = text_[pos_];

    if (c == '(') {
      auto start = static_cast<std::uint32_t>(pos_);
      ++pos_;
      Node inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      inner.begin = start;
      inner.end = static_cast<std::uint32_t>(pos_);
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      auto start = static_cast<std::uint32_t>(pos_);
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));

      if (peek() == '(') {
        const FnInfo* fn = lookup_function(name);
        if (!fn) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        Node n;
        n.kind = Kind::call;
        n.name = std::move(name);
        n.begin = start;
        n.args.push_back(parse_expr());
        while (consume(',')) n.args.push_back(parse_expr());
        if (!consume(')')) fail("expected ',' or ')'");
        n.end = static_cast<std::uint32_t>(pos_);
        auto argc = static_cast<int>(n.args.size());
        if (argc < fn->min_args || (fn->max_args >= 0 && argc > fn->max_args)) {
          pos_ = start;
          fail("function '" + n.name + "' called with " + std::to_string(argc) +
               " argument(s)");
        }
        return n;
      }

      Node n;
      n.kind = Kind::var;
      n.name = std::move(name);
      n.begin = start;
      n.end = static_cast<std::uint32_t>(pos_);
      return n;
    }

    fail("expected number, identifier, or '('");
  }

  Node parse_number() {
    auto start = static_cast<std::uint32_t>(pos_);
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail("malformed number literal");
    pos_ += static_cast<std::size_t>(ptr - first);
    Node n;
    n.kind = Kind::number;
    n.number = value;
    n.begin = start;
    n.end = static_cast<std::uint32_t>(pos_);
    return n;
  }

  static Node make_binary(Kind kind, Node lhs, Node rhs) {
    Node n;
    n.kind = kind;
    n.begin = lhs.begin;
    n.end = rhs.end;
    n.args.push_back(std::move(lhs));
    n.args.push_back(std::move(rhs));
    return n;
  }
};

void collect_vars(const Node& n, std::set<std::string>& out) {
  if (n.kind == Kind::var) out.insert(n.name);
  for (const auto& a : n.args) collect_vars(a, out);
}

[[noreturn]] void eval_fail(const Node& n, const std::string& text, const char* what) {
  throw EvalError(std::string(what) + " in '" +
                  text.substr(n.begin, n.end - n.begin) + "'");
}

double check_finite(double v, const Node& n, const std::string& text) {
  if (!std::isfinite(v)) eval_fail(n, text, "non-finite result");
  return v;
}

double eval_node(const Node& n, const std::string& text,
                 std::span<const Binding> bindings) {
  switch (n.kind) {
    case Kind::number:
      return n.number;
    case Kind::var:
      for (const auto& b : bindings)
        if (b.name == n.name) return b.value;
      throw EvalError("unbound variable '" + n.name + "'");
    case Kind::neg:
      return -eval_node(n.args[0], text, bindings);
    case Kind::add:
      return check_finite(eval_node(n.args[0], text, bindings) +
                              eval_node(n.args[1], text, bindings),
                          n, text);
    case Kind::sub:
      return check_finite(eval_node(n.args[0], text, bindings) -
                              eval_node(n.args[1], text, bindings),
                          n, text);
    case Kind::mul:
      return check_finite(eval_node(n.args[0], text, bindings) *
                              eval_node(n.args[1], text, bindings),
                          n, text);
    case Kind::div: {
      double num = eval_node(n.args[0], text, bindings);
      double den = eval_node(n.args[1], text, bindings);
      if (den == 0.0) eval_fail(n, text, "division by zero");
      return check_finite(num / den, n, text);
    }
    case Kind::pow: {
      double base = eval_node(n.args[0], text, bindings);
      double exponent = eval_node(n.args[1], text, bindings);
      if (base == 0.0 && exponent < 0.0) eval_fail(n, text, "zero raised to negative power");
      return check_finite(std::pow(base, exponent), n, text);
    }
    case Kind::call: {
      if (n.name == "min" || n.name == "max") {
        bool take_max = n.name == "max";
        double acc = eval_node(n.args[0], text, bindings);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
          double v = eval_node(n.args[i], text, bindings);
          acc = take_max ? (v > acc ? v : acc) : (v < acc ? v : acc);
        }
        return acc;
      }
      double arg = eval_node(n.args[0], text, bindings);
      if (n.name == "abs") return std::fabs(arg);
      if (n.name == "sqrt") {
        if (arg < 0.0) eval_fail(n, text, "sqrt of negative");
        return std::sqrt(arg);
      }
      if (n.name == "exp") return check_finite(std::exp(arg), n, text);
      // log
      if (arg <= 0.0) eval_fail(n, text, "log of non-positive");
      return check_finite(std::log(arg), n, text);
    }
  }
  throw EvalError("corrupt expression tree");
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
    return false;
  if (a.kind == Kind::number && a.number != b.number) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!nodes_equal(a.args[i], b.args[i])) return false;
  return true;
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Parser parser(text);
  auto root = std::make_shared<Node>(parser.run());
  auto vars = std::make_shared<std::set<std::string>>();
  collect_vars(*root, *vars);
  Expr e;
  e.root_ = std::move(root);
  e.text_ = std::make_shared<const std::string>(text);
  e.free_vars_ = std::move(vars);
  return e;
}

double Expr::eval(std::span<const Binding> bindings) const {
  return eval_node(*root_, *text_, bindings);
}

bool Expr::operator==(const Expr& other) const {
  return nodes_equal(*root_, *other.root_);
}

}  // namespace quasifix
