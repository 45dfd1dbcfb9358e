#include "quasifix/picard.hpp"

#include <algorithm>
#include <stdexcept>

#include "quasifix/numfmt.hpp"

namespace quasifix {

Trajectory iterate(const ContractionSystem& sys, double x0, double tol, int max_iter) {
  if (!sys.space.domain().contains(x0))
    throw std::invalid_argument("x0 outside the space domain");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  Trajectory t;
  t.x0 = x0;
  t.iterates.push_back(x0);
  double x = x0;
  for (int n = 0; n < max_iter; ++n) {
    double next = sys.apply_map(x);
    if (!sys.space.domain().contains(next))
      throw std::domain_error("orbit escaped the domain at step " + std::to_string(n + 1) +
                              ": x = " + format_double(next));
    double qf = sys.space.raw_q(x, next);
    double qb = sys.space.raw_q(next, x);
    t.iterates.push_back(next);
    t.q_fwd.push_back(qf);
    t.q_bwd.push_back(qb);
    if (std::max(qf, qb) < tol) {
      t.converged = true;
      t.fixed_point = next;
      t.iterations_used = n;
      return t;
    }
    x = next;
  }
  t.converged = false;
  t.iterations_used = max_iter;
  return t;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "n,x,q_fwd,q_bwd\n";
  for (std::size_t n = 0; n < t.iterates.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(t.iterates[n]);
    out += ',';
    if (n < t.q_fwd.size()) out += format_double(t.q_fwd[n]);
    out += ',';
    if (n < t.q_bwd.size()) out += format_double(t.q_bwd[n]);
    out += '\n';
  }
  return out;
}

UniquenessProbe uniqueness_probe(const ContractionSystem& sys,
                                 std::span<const double> seeds, double tol,
                                 int max_iter) {
  if (seeds.empty()) throw std::invalid_argument("uniqueness probe requires seeds");
  UniquenessProbe probe;
  bool all_converged = true;
  for (double s : seeds) {
    Trajectory t = iterate(sys, s, tol, max_iter);
    probe.runs.push_back({s, t.converged, t.fixed_point, t.iterations_used});
    std::string name = "converged(x0=" + format_double(s) + ")";
    if (t.converged)
      probe.report.add(name, CheckStatus::pass, {},
                       "fixed point " + format_double(*t.fixed_point) + " after " +
                           std::to_string(t.iterations_used) + " iterations");
    else {
      probe.report.add(name, CheckStatus::fail, {s},
                       "did not converge within " + std::to_string(max_iter) +
                           " iterations");
      all_converged = false;
    }
  }

  if (!all_converged) {
    probe.report.add("limits-agree", CheckStatus::vacuous, {},
                     "not all seeds converged");
    return probe;
  }
  for (std::size_t i = 0; i < probe.runs.size(); ++i)
    for (std::size_t j = 0; j < probe.runs.size(); ++j) {
      if (i == j) continue;
      double a = *probe.runs[i].fixed_point;
      double b = *probe.runs[j].fixed_point;
      double d = sys.space.raw_q(a, b);
      if (!(d < tol)) {
        probe.report.add("limits-agree", CheckStatus::fail, {a, b},
                         "q(" + format_double(a) + ", " + format_double(b) +
                             ") = " + format_double(d) + " exceeds tol");
        return probe;
      }
    }
  probe.report.add("limits-agree", CheckStatus::pass, {},
                   "all pairwise q between fixed points below tol");
  return probe;
}

}  // namespace quasifix
