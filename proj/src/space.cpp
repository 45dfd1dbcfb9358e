#include "quasifix/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quasifix/numfmt.hpp"
#include "quasifix/parallel.hpp"
#include "quasifix/rng.hpp"

namespace quasifix {

namespace {

constexpr double kTriangleSlack = 1e-12;

void validate_piecewise_vars(const Expr& e, const char* which) {
  for (const auto& v : e.free_vars())
    if (v != "x" && v != "y")
      throw std::invalid_argument(std::string("piecewise ") + which +
                                  " expression uses unknown variable '" + v + "'");
}

}  // namespace

SampleGrid SampleGrid::standard(Interval domain, std::size_t n_equi,
                                std::size_t n_random, std::uint64_t seed) {
  std::vector<double> pts;
  pts.reserve(n_equi + n_random);
  if (n_equi == 1) {
    pts.push_back(domain.lo);
  } else if (n_equi > 1) {
    for (std::size_t i = 0; i < n_equi; ++i)
      pts.push_back(domain.lo +
                    domain.length() * (static_cast<double>(i) / static_cast<double>(n_equi - 1)));
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < n_random; ++i) pts.push_back(rng.uniform(domain.lo, domain.hi));
  SampleGrid g = of(std::move(pts));
  g.seed = seed;
  return g;
}

SampleGrid SampleGrid::equispaced(Interval domain, std::size_t n) {
  return standard(domain, n, 0, 0);
}

SampleGrid SampleGrid::of(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("sample grid must be nonempty");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  SampleGrid g;
  g.points = std::move(points);
  return g;
}

SampleGrid SampleGrid::refined() const {
  std::vector<double> pts;
  pts.reserve(points.size() * 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts.push_back(points[i]);
    if (i + 1 < points.size()) pts.push_back(0.5 * (points[i] + points[i + 1]));
  }
  SampleGrid g = of(std::move(pts));
  g.seed = seed;
  return g;
}

QuasiMetricSpace QuasiMetricSpace::piecewise(Interval domain, Expr gt, Expr lt,
                                             std::optional<double> declared_delta) {
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("domain must satisfy lo < hi");
  if (declared_delta && *declared_delta <= 0.0)
    throw std::invalid_argument("declared delta must be positive");
  validate_piecewise_vars(gt, "x>y");
  validate_piecewise_vars(lt, "x<y");
  QuasiMetricSpace s;
  s.domain_ = domain;
  s.gt_ = std::move(gt);
  s.lt_ = std::move(lt);
  s.declared_delta_ = declared_delta;
  return s;
}

QuasiMetricSpace QuasiMetricSpace::preset(const std::string& name, double lambda,
                                          Interval domain) {
  QuasiMetricSpace s;
  if (name == "sorgenfrey") {
    s = piecewise(domain, Expr::parse("1"), Expr::parse("y-x"), {});
    s.native_ = Native::sorgenfrey;
  } else if (name == "weighted-abs") {
    if (!(lambda > 0.0)) throw std::invalid_argument("weighted-abs requires lambda > 0");
    s = piecewise(domain, Expr::parse("x-y"),
                  Expr::parse(format_double(lambda) + "*(y-x)"),
                  std::max(lambda, 1.0 / lambda));
    s.native_ = Native::weighted_abs;
    s.lambda_ = lambda;
  } else if (name == "example3") {
    s = piecewise(domain, Expr::parse("2*x"), Expr::parse("y"), 2.0);
    s.native_ = Native::example3;
  } else if (name == "example4") {
    s = piecewise(domain, Expr::parse("8*x"), Expr::parse("4*y"), 2.0);
    s.native_ = Native::example4;
  } else {
    throw std::invalid_argument("unknown space preset '" + name + "'");
  }
  s.name_ = name;
  return s;
}

double QuasiMetricSpace::raw_q(double x, double y) const {
  if (x == y) return 0.0;
  switch (native_) {
    case Native::sorgenfrey:
      return y > x ? y - x : 1.0;
    case Native::weighted_abs:
      return x > y ? x - y : lambda_ * (y - x);
    case Native::example3:
      return x > y ? 2.0 * x : y;
    case Native::example4:
      return x > y ? 8.0 * x : 4.0 * y;
    case Native::generic:
      break;
  }
  const Binding b[2] = {{"x", x}, {"y", y}};
  const Expr& e = x > y ? *gt_ : *lt_;
  return e.eval(std::span<const Binding>(b, 2));
}

double QuasiMetricSpace::eval_q(double x, double y) const {
  if (!domain_.contains(x) || !domain_.contains(y))
    throw std::out_of_range("eval_q argument outside the space domain");
  double v = raw_q(x, y);
  if (v < 0.0)
    throw EvalError("axiom violation: q(" + format_double(x) + ", " + format_double(y) +
                    ") = " + format_double(v) + " is negative");
  return v;
}

bool QuasiMetricSpace::ball_contains(double center, double radius, double point,
                                     Direction dir) const {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  return dir == Direction::forward ? eval_q(center, point) < radius
                                   : eval_q(point, center) < radius;
}

Report QuasiMetricSpace::check_axioms(const SampleGrid& grid) const {
  if (grid.empty()) throw std::invalid_argument("check_axioms requires a nonempty grid");
  const auto& p = grid.points;
  const std::size_t n = p.size();

  // Cache the full q matrix so the triple loop is lookups only.
  std::vector<double> q(n * n);
  {
    std::size_t nchunks = plan_chunks(n, 8);
    run_chunks(n, nchunks, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i * n + j] = raw_q(p[i], p[j]);
    });
  }
  auto qv = [&](std::size_t i, std::size_t j) { return q[i * n + j]; };

  Report report;

  {  // axiom 1: non-negativity
    std::size_t wi = n, wj = n;
    for (std::size_t i = 0; i < n && wi == n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (qv(i, j) < 0.0) {
          wi = i;
          wj = j;
          break;
        }
    if (wi == n)
      report.add("non-negativity", CheckStatus::pass, {},
                 "q >= 0 on all " + std::to_string(n * n) + " pairs");
    else
      report.add("non-negativity", CheckStatus::fail, {p[wi], p[wj]},
                 "q(" + format_double(p[wi]) + ", " + format_double(p[wj]) +
                     ") = " + format_double(qv(wi, wj)));
  }

  {  // axiom 2: q(x,y) = 0 iff x = y
    bool failed = false;
    for (std::size_t i = 0; i < n && !failed; ++i)
      if (qv(i, i) != 0.0) {
        report.add("identity", CheckStatus::fail, {p[i]},
                   "q(x, x) = " + format_double(qv(i, i)) + " at x = " + format_double(p[i]));
        failed = true;
      }
    for (std::size_t i = 0; i < n && !failed; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && qv(i, j) == 0.0) {
          report.add("identity", CheckStatus::fail, {p[i], p[j]},
                     "q = 0 on distinct points x = " + format_double(p[i]) +
                         ", y = " + format_double(p[j]));
          failed = true;
          break;
        }
    if (!failed)
      report.add("identity", CheckStatus::pass, {},
                 "q(x,x) = 0 and q > 0 on distinct pairs");
  }

  {  // axiom 3: triangle inequality over all ordered triples
    const std::size_t none = n * n * n;
    std::size_t nchunks = plan_chunks(n, 1);
    std::vector<std::size_t> chunk_best(nchunks, none);
    run_chunks(n, nchunks, [&](std::size_t c, std::size_t b, std::size_t e) {
      // Scan order is lexicographic, so the first hit is the chunk minimum.
      for (std::size_t i = b; i < e; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double qij = qv(i, j);
          for (std::size_t k = 0; k < n; ++k)
            if (qij > qv(i, k) + qv(k, j) + kTriangleSlack) {
              chunk_best[c] = (i * n + j) * n + k;
              return;
            }
        }
    });
    std::size_t best = none;
    for (auto b : chunk_best) best = std::min(best, b);
    if (best == none) {
      report.add("triangle", CheckStatus::pass, {},
                 "q(x,y) <= q(x,z) + q(z,y) on all triples (slack 1e-12)");
    } else {
      std::size_t i = best / (n * n), j = (best / n) % n, k = best % n;
      report.add("triangle", CheckStatus::fail, {p[i], p[j], p[k]},
                 "q(x,y) = " + format_double(qv(i, j)) + " > " +
                     format_double(qv(i, k)) + " + " + format_double(qv(k, j)) +
                     " via z = " + format_double(p[k]));
    }
  }

  if (declared_delta_) {  // Def 1.5 check when a delta is declared
    const double delta = *declared_delta_;
    std::size_t wi = n, wj = n;
    for (std::size_t i = 0; i < n && wi == n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (qv(i, j) > delta * qv(j, i) + kTriangleSlack) {
          wi = i;
          wj = j;
          break;
        }
    if (wi == n)
      report.add("delta-symmetry", CheckStatus::pass, {},
                 "q(x,y) <= " + format_double(delta) + "*q(y,x) on all pairs");
    else
      report.add("delta-symmetry", CheckStatus::fail, {p[wi], p[wj]},
                 "q(x,y) = " + format_double(qv(wi, wj)) + " > " + format_double(delta) +
                     " * " + format_double(qv(wj, wi)));
  }

  return report;
}

namespace {

std::pair<double, bool> delta_scan(const QuasiMetricSpace& s,
                                   const std::vector<double>& p) {
  double best = 0.0;
  bool unbounded = false;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      double fwd = s.raw_q(p[i], p[j]);
      double bwd = s.raw_q(p[j], p[i]);
      if (bwd == 0.0) {
        if (fwd > 0.0) unbounded = true;
        continue;
      }
      best = std::max(best, fwd / bwd);
    }
  return {best, unbounded};
}

}  // namespace

DeltaEstimate QuasiMetricSpace::estimate_delta(const SampleGrid& grid) const {
  if (grid.size() < 2)
    throw std::invalid_argument("estimate_delta requires a grid with at least 2 points");
  DeltaEstimate est;
  auto [value, unbounded] = delta_scan(*this, grid.points);
  est.value = value;
  est.unbounded = unbounded;
  auto [refined, refined_unbounded] = delta_scan(*this, grid.refined().points);
  est.refined_value = refined;
  est.unbounded = est.unbounded || refined_unbounded;
  est.unstable = est.unbounded || refined > value * 1.25;
  return est;
}

}  // namespace quasifix
