#include "quasifix/hyperspace.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "quasifix/numfmt.hpp"
#include "quasifix/parallel.hpp"

namespace quasifix {

FiniteCompactSet FiniteCompactSet::of(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("compact set must be nonempty");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  FiniteCompactSet s;
  s.points_ = std::move(points);
  return s;
}

void FiniteCompactSet::validate_within(const Interval& domain) const {
  for (double p : points_)
    if (!domain.contains(p))
      throw std::out_of_range("set point " + format_double(p) + " outside the domain");
}

double q_gap(const FiniteCompactSet& a, const FiniteCompactSet& b,
             const QuasiMetricSpace& space) {
  const auto& pa = a.points();
  const auto& pb = b.points();
  auto row_inf = [&](double x) {
    double inf = std::numeric_limits<double>::infinity();
    for (double y : pb) inf = std::min(inf, space.raw_q(x, y));
    return inf;
  };

  // sup and inf are exact reductions, so chunked evaluation is
  // order-independent.
  const std::size_t work = pa.size() * pb.size();
  double sup = 0.0;
  if (work >= (1u << 20)) {
    std::size_t nchunks = plan_chunks(pa.size(), 64);
    std::vector<double> chunk_sup(nchunks, 0.0);
    run_chunks(pa.size(), nchunks, [&](std::size_t c, std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s = std::max(s, row_inf(pa[i]));
      chunk_sup[c] = s;
    });
    for (double s : chunk_sup) sup = std::max(sup, s);
  } else {
    for (double x : pa) sup = std::max(sup, row_inf(x));
  }
  return sup;
}

double hausdorff(const FiniteCompactSet& a, const FiniteCompactSet& b,
                 const QuasiMetricSpace& space) {
  return std::max(q_gap(a, b, space), q_gap(b, a, space));
}

FiniteCompactSet set_union(const FiniteCompactSet& a, const FiniteCompactSet& b) {
  std::vector<double> pts;
  pts.reserve(a.size() + b.size());
  pts.insert(pts.end(), a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return FiniteCompactSet::of(std::move(pts));
}

Report check_union_bound(
    const QuasiMetricSpace& space,
    std::span<const std::pair<FiniteCompactSet, FiniteCompactSet>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("union bound check requires pairs");
  Report report;

  FiniteCompactSet ua = pairs[0].first;
  FiniteCompactSet ub = pairs[0].second;
  double rhs = hausdorff(pairs[0].first, pairs[0].second, space);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    ua = set_union(ua, pairs[i].first);
    ub = set_union(ub, pairs[i].second);
    rhs = std::max(rhs, hausdorff(pairs[i].first, pairs[i].second, space));
  }
  double lhs = hausdorff(ua, ub, space);
  if (lhs <= rhs + 1e-12)
    report.add("union-bound", CheckStatus::pass, {lhs, rhs},
               "h_q(U A_i, U B_i) = " + format_double(lhs) +
                   " <= max_i h_q(A_i, B_i) = " + format_double(rhs));
  else
    report.add("union-bound", CheckStatus::fail, {lhs, rhs},
               "h_q(U A_i, U B_i) = " + format_double(lhs) + " > max_i h_q(A_i, B_i) = " +
                   format_double(rhs));
  return report;
}

FiniteCompactSet parse_set_csv(const std::string& content) {
  std::vector<double> pts;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string line = content.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (!saw_header) {
      if (line != "x") throw std::invalid_argument("set file must start with header 'x'");
      saw_header = true;
      continue;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw std::invalid_argument("bad set file row: '" + line + "'");
    pts.push_back(v);
  }
  if (!saw_header) throw std::invalid_argument("set file must start with header 'x'");
  return FiniteCompactSet::of(std::move(pts));
}

std::string set_csv(const FiniteCompactSet& set) {
  std::string out = "x\n";
  for (double p : set.points()) {
    out += format_double(p);
    out += '\n';
  }
  return out;
}

}  // namespace quasifix
