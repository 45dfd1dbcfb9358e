#include <doctest.h>

#include <cmath>

#include "quasifix/expr.hpp"
#include "quasifix/rng.hpp"

using namespace quasifix;

TEST_CASE("parse collects free variables") {
  auto e = Expr::parse("x^2/(4*x^2+3)");
  CHECK(e.free_vars() == std::set<std::string>{"x"});

  auto f = Expr::parse("t/(t+1)-s");
  CHECK(f.free_vars() == std::set<std::string>{"s", "t"});

  CHECK(Expr::parse("1+2").free_vars().empty());
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    Expr::parse("x^^2");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset == 2);
  }

  CHECK_THROWS_AS(Expr::parse(""), ParseError);
  CHECK_THROWS_AS(Expr::parse("1+"), ParseError);
  CHECK_THROWS_AS(Expr::parse("(1+2"), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(1)"), ParseError);   // unknown function
  CHECK_THROWS_AS(Expr::parse("sqrt(1,2)"), ParseError);  // arity
  CHECK_THROWS_AS(Expr::parse("min(1)"), ParseError);
}

TEST_CASE("evaluation follows standard arithmetic") {
  auto T = Expr::parse("x^2/(4*x^2+3)");
  CHECK(T.eval({{"x", 1.0}}) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));

  auto xi = Expr::parse("t/(t+1)-s");
  CHECK(xi.eval({{"s", 0.0}, {"t", 0.0}}) == 0.0);

  CHECK(Expr::parse("1+2*3").eval() == 7.0);
  CHECK(Expr::parse("2^3^2").eval() == 512.0);  // right-associative power
  CHECK(Expr::parse("-2^2").eval() == -4.0);    // unary minus outside the power
  CHECK(Expr::parse("2^-1").eval() == 0.5);
  CHECK(Expr::parse("min(3, 1+1, 7)").eval() == 2.0);
  CHECK(Expr::parse("max(0.8, 3.2)").eval() == 3.2);
  CHECK(Expr::parse("abs(-3)").eval() == 3.0);
  CHECK(Expr::parse("sqrt(9)").eval() == 3.0);
  CHECK(Expr::parse("log(exp(1))").eval() == doctest::Approx(1.0));
}

TEST_CASE("domain errors are raised, never silent NaN") {
  auto inv = Expr::parse("1/x");
  CHECK_THROWS_AS(inv.eval({{"x", 0.0}}), EvalError);

  CHECK_THROWS_AS(Expr::parse("log(0-1)").eval(), EvalError);
  CHECK_THROWS_AS(Expr::parse("sqrt(0-1)").eval(), EvalError);
  CHECK_THROWS_AS(Expr::parse("0^-1").eval(), EvalError);
  CHECK_THROWS_AS(Expr::parse("(-1)^0.5").eval(), EvalError);  // NaN from pow
  CHECK_THROWS_AS(Expr::parse("exp(10000)").eval(), EvalError);  // overflow

  auto e = Expr::parse("x+1");
  CHECK_THROWS_AS(e.eval(), EvalError);  // unbound variable
}

TEST_CASE("error messages name the offending subexpression") {
  auto e = Expr::parse("1 + 1/(x-1)");
  try {
    e.eval({{"x", 1.0}});
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("1/(x-1)") != std::string::npos);
  }
}

TEST_CASE("parsing is deterministic and structural equality holds") {
  const char* text = "max(x, y*2) - min(x^2, 1/y)";
  auto a = Expr::parse(text);
  auto b = Expr::parse(text);
  CHECK(a == b);
  CHECK_FALSE(Expr::parse("x+y") == Expr::parse("y+x"));

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double x = rng.uniform(0.1, 2.0), y = rng.uniform(0.1, 2.0);
    Binding bs[] = {{"x", x}, {"y", y}};
    CHECK(a.eval(bs) == b.eval(bs));
  }
}

TEST_CASE("whitespace and numeric literal forms") {
  CHECK(Expr::parse(" 1.5e2 + 2 ").eval() == 152.0);
  CHECK(Expr::parse("0.25").eval() == 0.25);
  CHECK(Expr::parse("3*t/4-s").eval({{"t", 4.0}, {"s", 1.0}}) == 2.0);
}
