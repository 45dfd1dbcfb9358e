#include <doctest.h>

#include <cmath>

#include "quasifix/rng.hpp"
#include "quasifix/space.hpp"

using namespace quasifix;

namespace {

const char* kPresetNames[] = {"sorgenfrey", "weighted-abs", "example3", "example4"};

QuasiMetricSpace make_preset(const std::string& name) {
  return QuasiMetricSpace::preset(name, name == "weighted-abs" ? 2.0 : 0.0);
}

}  // namespace

TEST_CASE("example3 piecewise values") {
  auto s = QuasiMetricSpace::preset("example3");
  CHECK(s.eval_q(0.5, 0.25) == 1.0);   // x>y: 2x
  CHECK(s.eval_q(0.25, 0.5) == 0.5);   // x<y: y
  CHECK(s.eval_q(0.3, 0.3) == 0.0);
  CHECK_THROWS_AS(s.eval_q(1.5, 0.0), std::out_of_range);
}

TEST_CASE("preset q values match their defining formulas") {
  auto sorgenfrey = QuasiMetricSpace::preset("sorgenfrey");
  CHECK(sorgenfrey.eval_q(0.0, 0.25) == 0.25);
  CHECK(sorgenfrey.eval_q(0.25, 0.0) == 1.0);

  auto wabs = QuasiMetricSpace::preset("weighted-abs", 2.0);
  CHECK(wabs.eval_q(0.75, 0.25) == 0.5);
  CHECK(wabs.eval_q(0.25, 0.75) == 1.0);

  auto e4 = QuasiMetricSpace::preset("example4");
  CHECK(e4.eval_q(0.5, 0.25) == 4.0);
  CHECK(e4.eval_q(0.25, 0.5) == 2.0);
}

TEST_CASE("axioms pass on all shipped presets") {
  auto grid = SampleGrid::standard({0.0, 1.0}, 21, 20, 0);
  for (const char* name : kPresetNames) {
    auto report = make_preset(name).check_axioms(grid);
    INFO("preset ", name);
    CHECK(report.all_passed());
  }
}

TEST_CASE("axioms pass on sorgenfrey over a 0.1-step grid") {
  auto grid = SampleGrid::equispaced({0.0, 1.0}, 11);
  auto report = QuasiMetricSpace::preset("sorgenfrey").check_axioms(grid);
  CHECK(report.all_passed());
}

TEST_CASE("a symmetric piecewise definition is an ordinary metric") {
  auto s = QuasiMetricSpace::piecewise({0.0, 1.0}, Expr::parse("x-y"), Expr::parse("y-x"));
  auto report = s.check_axioms(SampleGrid::equispaced({0.0, 1.0}, 11));
  CHECK(report.all_passed());
}

TEST_CASE("non-negativity failure carries a witness") {
  auto s = QuasiMetricSpace::piecewise({0.0, 1.0}, Expr::parse("x-2*y"), Expr::parse("y-x"));
  auto report = s.check_axioms(SampleGrid::equispaced({0.0, 1.0}, 11));
  const Check* c = report.find("non-negativity");
  REQUIRE(c != nullptr);
  CHECK(c->status == CheckStatus::fail);
  REQUIRE(c->witness.size() == 2);
  double x = c->witness[0], y = c->witness[1];
  CHECK(s.raw_q(x, y) < 0.0);  // the witness reproduces the violation
  CHECK(x > y);
}

TEST_CASE("delta estimates for the presets") {
  auto grid = SampleGrid::equispaced({0.0, 1.0}, 101);  // step 0.01

  SUBCASE("example3 is exactly 2-symmetric") {
    auto est = QuasiMetricSpace::preset("example3").estimate_delta(grid);
    CHECK(est.value == 2.0);
    CHECK_FALSE(est.unstable);
  }
  SUBCASE("weighted-abs lambda=2 gives exactly 2") {
    auto est = QuasiMetricSpace::preset("weighted-abs", 2.0).estimate_delta(grid);
    CHECK(est.value == 2.0);
    CHECK_FALSE(est.unstable);
  }
  SUBCASE("example4 gives exactly 2 on any grid with two positive points") {
    auto est = QuasiMetricSpace::preset("example4").estimate_delta(
        SampleGrid::of({0.3, 0.7}));
    CHECK(est.value == 2.0);
    auto est2 = QuasiMetricSpace::preset("example4").estimate_delta(grid);
    CHECK(est2.value == 2.0);
  }
  SUBCASE("sorgenfrey has no finite delta") {
    auto est = QuasiMetricSpace::preset("sorgenfrey").estimate_delta(grid);
    CHECK(est.value >= 100.0);
    CHECK(est.unstable);  // grows under refinement: the warning condition
  }
}

TEST_CASE("ball membership is direction-sensitive") {
  auto s = QuasiMetricSpace::preset("example3");
  CHECK(s.ball_contains(0.0, 0.3, 0.25, Direction::forward));        // q(0,0.25)=0.25
  CHECK_FALSE(s.ball_contains(0.0, 0.3, 0.25, Direction::backward)); // q(0.25,0)=0.5
  CHECK(s.ball_contains(0.4, 0.1, 0.4, Direction::forward));
  CHECK(s.ball_contains(0.4, 0.1, 0.4, Direction::backward));
  CHECK_THROWS_AS(s.ball_contains(0.0, 0.0, 0.25, Direction::forward),
                  std::invalid_argument);
}

TEST_CASE("forward convergence implies backward on delta-symmetric presets") {
  // a_n = a + c/n: pointwise q(a_n, a) <= delta * q(a, a_n) certifies that
  // any f-convergent test sequence is also b-convergent.
  for (const char* name : {"weighted-abs", "example3", "example4"}) {
    auto s = make_preset(name);
    double delta = *s.declared_delta();
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
      double a = rng.uniform(0.0, 0.5);
      double c = rng.uniform(0.0, 0.5 - 1e-9);
      for (int n = 1; n <= 64; n *= 2) {
        double an = a + c / n;
        CHECK(s.eval_q(an, a) <= delta * s.eval_q(a, an) + 1e-12);
      }
    }
  }
}

TEST_CASE("grid construction is normalized") {
  auto g = SampleGrid::of({0.5, 0.25, 0.5, 0.75});
  CHECK(g.points == std::vector<double>{0.25, 0.5, 0.75});
  CHECK_THROWS_AS(SampleGrid::of({}), std::invalid_argument);

  auto std_grid = SampleGrid::standard({0.0, 1.0}, 101, 100, 0);
  CHECK(std_grid.size() == 201);  // no collisions between draws and the lattice
  CHECK(std::is_sorted(std_grid.points.begin(), std_grid.points.end()));
  CHECK(std_grid.points.front() >= 0.0);
  CHECK(std_grid.points.back() <= 1.0);

  auto again = SampleGrid::standard({0.0, 1.0}, 101, 100, 0);
  CHECK(again.points == std_grid.points);  // seeded determinism
}

TEST_CASE("piecewise expressions reject unknown variables") {
  CHECK_THROWS_AS(
      QuasiMetricSpace::piecewise({0.0, 1.0}, Expr::parse("x-z"), Expr::parse("y-x")),
      std::invalid_argument);
}
