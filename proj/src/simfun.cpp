#include "quasifix/simfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quasifix/numfmt.hpp"
#include "quasifix/rng.hpp"

namespace quasifix {

namespace {

void require_vars(const Expr& e, std::initializer_list<const char*> allowed,
                  const char* role) {
  for (const auto& v : e.free_vars()) {
    bool ok = false;
    for (const char* a : allowed)
      if (v == a) ok = true;
    if (!ok)
      throw std::invalid_argument(std::string(role) + " expression uses unknown variable '" +
                                  v + "'");
  }
}

}  // namespace

SimulationFunction SimulationFunction::from_expr(Expr xi) {
  require_vars(xi, {"s", "t"}, "xi");
  SimulationFunction f;
  f.kind_ = Kind::expr;
  f.exprs_.push_back(std::move(xi));
  return f;
}

SimulationFunction SimulationFunction::family_xi1(Expr p, Expr q) {
  require_vars(p, {"t"}, "p");
  require_vars(q, {"t"}, "q");
  SimulationFunction f;
  f.kind_ = Kind::xi1;
  f.exprs_.push_back(std::move(p));
  f.exprs_.push_back(std::move(q));
  return f;
}

SimulationFunction SimulationFunction::family_xi2(Expr fe, Expr ge) {
  require_vars(fe, {"s", "t"}, "f");
  require_vars(ge, {"s", "t"}, "g");
  // g must be positive where xi2 divides by it; probe a coarse lattice up
  // front so ill-posed configs fail at construction.
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) {
      double s = 0.25 * i, t = 0.25 * j;
      Binding b[2] = {{"s", s}, {"t", t}};
      double g = ge.eval(std::span<const Binding>(b, 2));
      if (!(g > 0.0))
        throw std::invalid_argument("xi2 requires g(s,t) > 0; g(" + format_double(s) +
                                    ", " + format_double(t) + ") = " + format_double(g));
    }
  SimulationFunction f;
  f.kind_ = Kind::xi2;
  f.exprs_.push_back(std::move(fe));
  f.exprs_.push_back(std::move(ge));
  return f;
}

SimulationFunction SimulationFunction::family_xi3(Expr h) {
  require_vars(h, {"t"}, "h");
  SimulationFunction f;
  f.kind_ = Kind::xi3;
  f.exprs_.push_back(std::move(h));
  return f;
}

SimulationFunction SimulationFunction::max_combined(std::vector<SimulationFunction> parts) {
  if (parts.empty())
    throw std::invalid_argument("max_combined requires a nonempty list");
  SimulationFunction f;
  f.kind_ = Kind::max_combined;
  f.parts_ = std::move(parts);
  return f;
}

double SimulationFunction::eval(double s, double t) const {
  if (s < 0.0 || t < 0.0)
    throw std::invalid_argument("simulation function arguments must be nonnegative");
  switch (kind_) {
    case Kind::expr: {
      const Binding b[2] = {{"s", s}, {"t", t}};
      return exprs_[0].eval(std::span<const Binding>(b, 2));
    }
    case Kind::xi1: {
      const Binding bt[1] = {{"t", t}};
      const Binding bs[1] = {{"t", s}};
      return exprs_[0].eval(std::span<const Binding>(bt, 1)) -
             exprs_[1].eval(std::span<const Binding>(bs, 1));
    }
    case Kind::xi2: {
      const Binding b[2] = {{"s", s}, {"t", t}};
      double f = exprs_[0].eval(std::span<const Binding>(b, 2));
      double g = exprs_[1].eval(std::span<const Binding>(b, 2));
      if (g == 0.0) throw EvalError("xi2 divides by g(s,t) = 0");
      return t - f / g * s;
    }
    case Kind::xi3: {
      const Binding bt[1] = {{"t", t}};
      return t - exprs_[0].eval(std::span<const Binding>(bt, 1)) - s;
    }
    case Kind::max_combined: {
      double best = parts_[0].eval(s, t);
      for (std::size_t i = 1; i < parts_.size(); ++i)
        best = std::max(best, parts_[i].eval(s, t));
      return best;
    }
  }
  throw std::logic_error("corrupt simulation function");
}

Report SimulationFunction::check_z_properties(const SampleGrid& s_grid,
                                              const SampleGrid& t_grid,
                                              std::size_t family_count,
                                              std::uint64_t seed) const {
  Report report;

  {  // z1: exact at the origin
    try {
      double v = eval(0.0, 0.0);
      if (v == 0.0)
        report.add("z1", CheckStatus::pass, {}, "xi(0,0) = 0");
      else
        report.add("z1", CheckStatus::fail, {v}, "xi(0,0) = " + format_double(v));
    } catch (const std::exception& err) {
      report.add("z1", CheckStatus::fail, {}, err.what());
    }
  }

  {  // z2: strict on the positive grid product
    std::vector<double> ss, ts;
    for (double v : s_grid.points)
      if (v > 0.0) ss.push_back(v);
    for (double v : t_grid.points)
      if (v > 0.0) ts.push_back(v);
    if (ss.empty() || ts.empty())
      throw std::invalid_argument("z2 requires grids with positive entries");
    bool failed = false;
    std::size_t checked = 0;
    for (double s : ss) {
      for (double t : ts) {
        ++checked;
        try {
          double v = eval(s, t);
          if (!(v < t - s)) {
            report.add("z2", CheckStatus::fail, {s, t},
                       "xi(" + format_double(s) + ", " + format_double(t) +
                           ") = " + format_double(v) + " not < t - s = " +
                           format_double(t - s));
            failed = true;
          }
        } catch (const std::exception& err) {
          report.add("z2", CheckStatus::fail, {s, t}, err.what());
          failed = true;
        }
        if (failed) break;
      }
      if (failed) break;
    }
    if (!failed)
      report.add("z2", CheckStatus::pass, {},
                 "xi(s,t) < t - s on " + std::to_string(checked) + " grid pairs");
  }

  {  // z3 surrogate: seeded sequence families with a common positive limit
    double t_max = *std::max_element(t_grid.points.begin(), t_grid.points.end());
    if (!(t_max > 0.0)) throw std::invalid_argument("z3 requires a positive t grid");
    Rng rng(seed);
    bool failed = false;
    for (std::size_t k = 0; k < family_count && !failed; ++k) {
      double L = t_max * (1.0 - rng.uniform01());  // (0, t_max]
      double a = rng.uniform(-L / 2.0, L / 2.0);
      double b = rng.uniform(-L / 2.0, L / 2.0);
      double worst = -std::numeric_limits<double>::infinity();
      try {
        for (int n = 900; n <= 1000; ++n)
          worst = std::max(worst, eval(L + a / n, L + b / n));
        if (!(worst < 0.0)) {
          report.add("z3", CheckStatus::fail, {L, a, b},
                     "family s_n = L+a/n, t_n = L+b/n: max xi over n in [900,1000] = " +
                         format_double(worst));
          failed = true;
        }
      } catch (const std::exception& err) {
        report.add("z3", CheckStatus::fail, {L, a, b}, err.what());
        failed = true;
      }
    }
    if (!failed)
      report.add("z3", CheckStatus::pass, {},
                 std::to_string(family_count) +
                     " surrogate families s_n = L+a/n, t_n = L+b/n passed "
                     "(finite sampled check, not a proof of z3)");
  }

  return report;
}

}  // namespace quasifix
