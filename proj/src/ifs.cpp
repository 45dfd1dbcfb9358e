#include "quasifix/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quasifix/numfmt.hpp"

namespace quasifix {

namespace {

void require_single_var(const Expr& e, const char* var, const char* role) {
  for (const auto& v : e.free_vars())
    if (v != var)
      throw std::invalid_argument(std::string(role) + " expression uses unknown variable '" +
                                  v + "'");
}

}  // namespace

IfsSystem::IfsSystem(QuasiMetricSpace space, Expr zeta, std::vector<IfsMap> maps)
    : space_(std::move(space)),
      zeta_(std::move(zeta)),
      maps_(std::move(maps)),
      combined_xi_(SimulationFunction::max_combined([&] {
        if (maps_.empty()) throw std::invalid_argument("IFS requires at least one map");
        std::vector<SimulationFunction> xis;
        for (const auto& m : maps_) xis.push_back(m.xi);
        return xis;
      }())) {
  require_single_var(zeta_, "t", "zeta");
  for (const auto& m : maps_) {
    require_single_var(m.map, "x", "map");
    require_single_var(m.eta, "t", "eta");
  }
}

double IfsSystem::zeta_at(double t) const {
  const Binding b[1] = {{"t", t}};
  return zeta_.eval(std::span<const Binding>(b, 1));
}

double IfsSystem::eta_at(std::size_t i, double t) const {
  const Binding b[1] = {{"t", t}};
  return maps_[i].eta.eval(std::span<const Binding>(b, 1));
}

double IfsSystem::combined_eta(double t) const {
  double best = eta_at(0, t);
  for (std::size_t i = 1; i < maps_.size(); ++i) best = std::max(best, eta_at(i, t));
  return best;
}

double IfsSystem::apply_map(std::size_t i, double x) const {
  const Binding b[1] = {{"x", x}};
  return maps_[i].map.eval(std::span<const Binding>(b, 1));
}

ContractionSystem IfsSystem::map_system(std::size_t i) const {
  return ContractionSystem(space_, maps_[i].map, maps_[i].xi,
                           ControlPair(zeta_, maps_[i].eta), Direction::forward);
}

namespace {

std::vector<double> image_points(const IfsSystem& ifs, const FiniteCompactSet& a) {
  const Interval dom = ifs.space().domain();
  std::vector<double> pts;
  pts.reserve(a.size() * ifs.maps().size());
  for (std::size_t i = 0; i < ifs.maps().size(); ++i)
    for (double x : a.points()) {
      double y = ifs.apply_map(i, x);
      if (!dom.contains(y))
        throw std::domain_error("image escapes domain: w_" + std::to_string(i + 1) + "(" +
                                format_double(x) + ") = " + format_double(y));
      pts.push_back(y);
    }
  return pts;
}

}  // namespace

FiniteCompactSet apply_operator(const IfsSystem& ifs, const FiniteCompactSet& a) {
  return FiniteCompactSet::of(image_points(ifs, a));
}

OperatorResult apply_operator_pruned(const IfsSystem& ifs, const FiniteCompactSet& a,
                                     std::size_t max_points) {
  FiniteCompactSet set = apply_operator(ifs, a);
  if (max_points == 0 || set.size() <= max_points) return {std::move(set), {}};

  const Interval dom = ifs.space().domain();
  const double mp = static_cast<double>(max_points);
  const double mesh = dom.length() / mp;
  std::vector<double> snapped;
  snapped.reserve(set.size());
  for (double p : set.points()) {
    // Scale before flooring so points sitting exactly on a mesh node do
    // not drop a cell to division rounding.
    double k = std::floor((p - dom.lo) * mp / dom.length());
    k = std::min(std::max(k, 0.0), mp);
    snapped.push_back(dom.lo + k * mesh);
  }
  FiniteCompactSet pruned = FiniteCompactSet::of(std::move(snapped));
  if (pruned.size() > max_points)
    throw std::length_error("set still exceeds max_points after pruning: " +
                            std::to_string(pruned.size()));
  return {std::move(pruned), mesh};
}

AttractorRun compute_attractor(const IfsSystem& ifs, const FiniteCompactSet& a0,
                               double tol, int max_iter, std::size_t max_points) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  a0.validate_within(ifs.space().domain());

  AttractorRun run;
  run.initial = a0;
  run.previous = a0;
  run.final = a0;
  run.sup_trace.push_back(a0.max());
  run.inf_trace.push_back(a0.min());

  FiniteCompactSet current = a0;
  for (int n = 0; n < max_iter; ++n) {
    OperatorResult next;
    try {
      next = apply_operator_pruned(ifs, current, max_points);
    } catch (const std::length_error& err) {
      throw std::length_error(std::string(err.what()) + " (iteration " +
                              std::to_string(n + 1) + ")");
    }
    if (next.mesh && !run.mesh) run.mesh = next.mesh;
    double h = hausdorff(current, next.set, ifs.space());
    run.h_trace.push_back(h);
    run.sup_trace.push_back(next.set.max());
    run.inf_trace.push_back(next.set.min());
    run.previous = std::move(current);
    current = std::move(next.set);
    run.stopped_at = n + 1;
    if (h < tol) {
      run.converged = true;
      break;
    }
  }
  run.final = std::move(current);
  return run;
}

Report verify_hyperspace_contraction(
    const IfsSystem& ifs,
    std::span<const std::pair<FiniteCompactSet, FiniteCompactSet>> samples) {
  if (samples.empty())
    throw std::invalid_argument("hyperspace verification requires sample pairs");
  const std::size_t n_maps = ifs.maps().size();
  Report report;

  struct Tally {
    std::size_t vacuous = 0, evaluated = 0;
    std::optional<Check> failure;  // first failing pair
  };
  Tally combined;
  std::vector<Tally> per_map(n_maps);

  auto record = [](Tally& t, const std::string& name, std::size_t k, double h_img,
                   double h_ab, double value) {
    if (h_img == 0.0 || h_ab == 0.0) {
      ++t.vacuous;
      return;
    }
    ++t.evaluated;
    if (!t.failure && !(value >= 0.0))
      t.failure = Check{name, CheckStatus::fail,
                        {static_cast<double>(k), h_img, h_ab},
                        "pair " + std::to_string(k) + ": xi(zeta(" + format_double(h_img) +
                            "), eta(" + format_double(h_ab) + ")) = " + format_double(value)};
  };

  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& [a, b] = samples[k];
    double h_ab = hausdorff(a, b, ifs.space());

    FiniteCompactSet wa = apply_operator(ifs, a);
    FiniteCompactSet wb = apply_operator(ifs, b);
    double h_w = hausdorff(wa, wb, ifs.space());
    double combined_value = h_w == 0.0 || h_ab == 0.0
                                ? 0.0
                                : ifs.combined_xi().eval(ifs.zeta_at(h_w),
                                                         ifs.combined_eta(h_ab));
    record(combined, "combined", k, h_w, h_ab, combined_value);

    for (std::size_t i = 0; i < n_maps; ++i) {
      std::vector<double> ia, ib;
      for (double x : a.points()) ia.push_back(ifs.apply_map(i, x));
      for (double x : b.points()) ib.push_back(ifs.apply_map(i, x));
      double h_i = hausdorff(FiniteCompactSet::of(std::move(ia)),
                             FiniteCompactSet::of(std::move(ib)), ifs.space());
      double value = h_i == 0.0 || h_ab == 0.0
                         ? 0.0
                         : ifs.maps()[i].xi.eval(ifs.zeta_at(h_i), ifs.eta_at(i, h_ab));
      record(per_map[i], "map[" + std::to_string(i + 1) + "]", k, h_i, h_ab, value);
    }
  }

  auto summarize = [&](const std::string& name, const Tally& t) {
    if (t.failure) {
      report.checks.push_back(*t.failure);
    } else if (t.evaluated == 0) {
      report.add(name, CheckStatus::vacuous, {},
                 "all " + std::to_string(t.vacuous) + " pairs vacuous");
    } else {
      report.add(name, CheckStatus::pass, {},
                 std::to_string(t.evaluated) + " pairs evaluated, " +
                     std::to_string(t.vacuous) + " vacuous");
    }
  };
  summarize("combined", combined);
  for (std::size_t i = 0; i < n_maps; ++i)
    summarize("map[" + std::to_string(i + 1) + "]", per_map[i]);
  return report;
}

}  // namespace quasifix
