#include "quasifix/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quasifix/numfmt.hpp"
#include "quasifix/rng.hpp"

namespace quasifix {

namespace {

void require_single_var(const Expr& e, const char* var, const char* role) {
  for (const auto& v : e.free_vars())
    if (v != var)
      throw std::invalid_argument(std::string(role) + " expression uses unknown variable '" +
                                  v + "'");
}

}  // namespace

ControlPair::ControlPair(Expr z, Expr e) : zeta(std::move(z)), eta(std::move(e)) {
  require_single_var(zeta, "t", "zeta");
  require_single_var(eta, "t", "eta");
}

double ControlPair::zeta_at(double t) const {
  const Binding b[1] = {{"t", t}};
  return zeta.eval(std::span<const Binding>(b, 1));
}

double ControlPair::eta_at(double t) const {
  const Binding b[1] = {{"t", t}};
  return eta.eval(std::span<const Binding>(b, 1));
}

ContractionSystem::ContractionSystem(QuasiMetricSpace space_, Expr map_,
                                     SimulationFunction xi_, ControlPair controls_,
                                     Direction orientation_)
    : space(std::move(space_)),
      map(std::move(map_)),
      xi(std::move(xi_)),
      controls(std::move(controls_)),
      orientation(orientation_) {
  require_single_var(map, "x", "map");
}

double ContractionSystem::apply_map(double x) const {
  const Binding b[1] = {{"x", x}};
  return map.eval(std::span<const Binding>(b, 1));
}

Report verify_inequality(const ContractionSystem& sys, const SampleGrid& grid) {
  const auto& p = grid.points;
  const std::size_t n = p.size();
  const Interval dom = sys.space.domain();
  Report report;

  // Map images first; an escape invalidates every pair through that point.
  std::vector<double> tp(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      tp[i] = sys.apply_map(p[i]);
    } catch (const std::exception& err) {
      report.add("inequality", CheckStatus::fail, {p[i]},
                 std::string("map evaluation failed at x = ") + format_double(p[i]) +
                     ": " + err.what());
      return report;
    }
    if (!dom.contains(tp[i])) {
      report.add("inequality", CheckStatus::fail, {p[i], tp[i]},
                 "map escapes domain: T(" + format_double(p[i]) + ") = " +
                     format_double(tp[i]));
      return report;
    }
  }

  std::size_t vacuous = 0, evaluated = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double q_img = sys.space.raw_q(tp[i], tp[j]);
      double q_arg = sys.orientation == Direction::forward ? sys.space.raw_q(p[i], p[j])
                                                           : sys.space.raw_q(p[j], p[i]);
      if (q_img == 0.0 || q_arg == 0.0) {
        ++vacuous;
        continue;
      }
      double value;
      try {
        value = sys.xi.eval(sys.controls.zeta_at(q_img), sys.controls.eta_at(q_arg));
      } catch (const std::exception& err) {
        report.add("inequality", CheckStatus::fail, {p[i], p[j]},
                   std::string("evaluation failed at (x, y) = (") + format_double(p[i]) +
                       ", " + format_double(p[j]) + "): " + err.what());
        return report;
      }
      ++evaluated;
      min_margin = std::min(min_margin, value);
      if (!(value >= 0.0)) {
        report.add("inequality", CheckStatus::fail, {p[i], p[j]},
                   "xi(zeta(q(Tx,Ty)), eta(q)) = " + format_double(value) +
                       " at (x, y) = (" + format_double(p[i]) + ", " +
                       format_double(p[j]) + ")");
        return report;
      }
    }
  }

  if (evaluated == 0) {
    report.add("inequality", CheckStatus::vacuous, {},
               "all " + std::to_string(vacuous) + " pairs vacuous (zero image or "
               "zero eta-argument distance)");
  } else {
    report.add("inequality", CheckStatus::pass, {},
               std::to_string(evaluated) + " pairs evaluated, " + std::to_string(vacuous) +
                   " vacuous, min margin " + format_double(min_margin));
  }
  return report;
}

namespace {

/// Sorted distinct positive q values over all ordered grid pairs.
std::vector<double> sampled_image(const QuasiMetricSpace& space, const SampleGrid& grid) {
  std::vector<double> image;
  const auto& p = grid.points;
  image.reserve(p.size() * p.size());
  for (double x : p)
    for (double y : p) {
      double v = space.raw_q(x, y);
      if (v > 0.0) image.push_back(v);
    }
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  return image;
}

}  // namespace

Report audit_hypotheses(const ContractionSystem& sys, const SampleGrid& grid,
                        std::size_t family_count, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("audit requires a nonempty grid");
  Report report;
  std::vector<double> image = sampled_image(sys.space, grid);
  if (image.empty()) {
    report.add("hypothesis-i-zeta-nondecreasing", CheckStatus::vacuous, {},
               "sampled image of q is empty");
    report.add("hypothesis-ii-eta-below-zeta", CheckStatus::vacuous, {},
               "sampled image of q is empty");
    report.add("hypothesis-iii-zeta-limits", CheckStatus::vacuous, {},
               "sampled image of q is empty");
    return report;
  }

  {  // (i) zeta nondecreasing on the sorted sampled image
    bool ok = true;
    for (std::size_t k = 0; k + 1 < image.size() && ok; ++k) {
      double z0 = sys.controls.zeta_at(image[k]);
      double z1 = sys.controls.zeta_at(image[k + 1]);
      if (z0 > z1) {
        report.add("hypothesis-i-zeta-nondecreasing", CheckStatus::fail,
                   {image[k], image[k + 1]},
                   "zeta(" + format_double(image[k]) + ") = " + format_double(z0) +
                       " > zeta(" + format_double(image[k + 1]) + ") = " +
                       format_double(z1));
        ok = false;
      }
    }
    if (ok)
      report.add("hypothesis-i-zeta-nondecreasing", CheckStatus::pass, {},
                 "nondecreasing on " + std::to_string(image.size()) + " sampled values");
  }

  {  // (ii) eta < zeta strictly on Im(q) \ {0}
    bool ok = true;
    for (double t : image) {
      double eta = sys.controls.eta_at(t);
      double zeta = sys.controls.zeta_at(t);
      if (!(eta < zeta)) {
        report.add("hypothesis-ii-eta-below-zeta", CheckStatus::fail, {t},
                   "eta(" + format_double(t) + ") = " + format_double(eta) +
                       " not < zeta(" + format_double(t) + ") = " + format_double(zeta));
        ok = false;
        break;
      }
    }
    if (ok)
      report.add("hypothesis-ii-eta-below-zeta", CheckStatus::pass, {},
                 "eta < zeta on " + std::to_string(image.size()) + " sampled values");
  }

  {  // (iii) surrogate: far tails of zeta along equal-limit families agree
    // and stay positive. The tail index is large (1e9) because a Lipschitz
    // zeta moves by ~|a-b|/n between the two sequences.
    const double t_max = image.back();
    Rng rng(seed);
    bool ok = true;
    for (std::size_t k = 0; k < family_count && ok; ++k) {
      double L = t_max * (1.0 - rng.uniform01());
      double a = rng.uniform(-L / 2.0, L / 2.0);
      double b = rng.uniform(-L / 2.0, L / 2.0);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      try {
        for (int i = 0; i <= 100; ++i) {
          double n = 1e9 + i;
          double za = sys.controls.zeta_at(L + a / n);
          double zb = sys.controls.zeta_at(L + b / n);
          lo = std::min(lo, std::min(za, zb));
          hi = std::max(hi, std::max(za, zb));
        }
        if (!(hi - lo <= 1e-6) || !(lo > 0.0)) {
          report.add("hypothesis-iii-zeta-limits", CheckStatus::fail, {L, a, b},
                     "tail of zeta along x_n = L+a/n, y_n = L+b/n spreads " +
                         format_double(hi - lo) + " with min " + format_double(lo));
          ok = false;
        }
      } catch (const std::exception& err) {
        report.add("hypothesis-iii-zeta-limits", CheckStatus::fail, {L, a, b}, err.what());
        ok = false;
      }
    }
    if (ok)
      report.add("hypothesis-iii-zeta-limits", CheckStatus::pass, {},
                 std::to_string(family_count) +
                     " surrogate families passed (sampled check, not a proof)");
  }

  return report;
}

RegularityProbe probe_asymptotic_regularity(const ContractionSystem& sys, double x0,
                                            int n_max) {
  if (!sys.space.domain().contains(x0))
    throw std::invalid_argument("x0 outside the space domain");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

  RegularityProbe probe;
  probe.steps.reserve(static_cast<std::size_t>(n_max) + 1);
  double x = x0;
  for (int n = 0; n <= n_max; ++n) {
    double next = sys.apply_map(x);
    if (!sys.space.domain().contains(next))
      throw std::domain_error("orbit escaped the domain at step " + std::to_string(n + 1) +
                              ": T^n x0 = " + format_double(next));
    probe.steps.push_back({n, sys.space.raw_q(x, next), sys.space.raw_q(next, x)});
    x = next;
  }
  const auto& last = probe.steps.back();
  probe.regular = last.q_fwd < 1e-9 && last.q_bwd < 1e-9;
  return probe;
}

Report probe_continuity(const ContractionSystem& sys, double x, double c, long n_max) {
  const Interval dom = sys.space.domain();
  if (!dom.contains(x) || !dom.contains(x + c))
    throw std::invalid_argument("x and x + c must lie in the domain");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

  const double xn = x + c / static_cast<double>(n_max);
  const double tx = sys.apply_map(x);
  const double txn = sys.apply_map(xn);
  constexpr double tol = 1e-6;

  Report report;
  auto judge = [&](const char* name, double premise, double conclusion) {
    if (!(premise < tol)) {
      report.add(name, CheckStatus::vacuous, {xn, premise},
                 "premise not met at the sampled tail: q = " + format_double(premise));
    } else if (conclusion < tol) {
      report.add(name, CheckStatus::pass, {},
                 "tail q through T = " + format_double(conclusion));
    } else {
      report.add(name, CheckStatus::fail, {xn, conclusion},
                 "x_n -> x but q through T stays at " + format_double(conclusion) +
                     " at n = " + std::to_string(n_max));
    }
  };

  judge("ff", sys.space.raw_q(x, xn), sys.space.raw_q(tx, txn));
  judge("bb", sys.space.raw_q(xn, x), sys.space.raw_q(txn, tx));
  return report;
}

}  // namespace quasifix
