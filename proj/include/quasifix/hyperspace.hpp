#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quasifix/report.hpp"
#include "quasifix/space.hpp"

namespace quasifix {

/// A nonempty finite point set (sorted, deduplicated) standing in for an
/// f-compact subset of the space. Finite sets make Q and h_q exactly
/// computable; discretization error is the caller's responsibility.
class FiniteCompactSet {
 public:
  static FiniteCompactSet of(std::vector<double> points);
  static FiniteCompactSet singleton(double x) { return of({x}); }

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double min() const { return points_.front(); }
  double max() const { return points_.back(); }
  bool operator==(const FiniteCompactSet& other) const { return points_ == other.points_; }

  /// Throws std::out_of_range if any point lies outside the interval.
  void validate_within(const Interval& domain) const;

 private:
  std::vector<double> points_;
};

/// Q(A,B) = sup over x in A of inf over y in B of q(x,y); exact double loop.
double q_gap(const FiniteCompactSet& a, const FiniteCompactSet& b,
             const QuasiMetricSpace& space);

/// h_q(A,B) = max(Q(A,B), Q(B,A)).
double hausdorff(const FiniteCompactSet& a, const FiniteCompactSet& b,
                 const QuasiMetricSpace& space);

/// Exact union of point sets.
FiniteCompactSet set_union(const FiniteCompactSet& a, const FiniteCompactSet& b);

/// Checks h_q(U A_i, U B_i) <= max_i h_q(A_i, B_i) within 1e-12 on the
/// given family of pairs.
Report check_union_bound(
    const QuasiMetricSpace& space,
    std::span<const std::pair<FiniteCompactSet, FiniteCompactSet>> pairs);

/// Set file format: CSV with header "x", one point per row, any order.
FiniteCompactSet parse_set_csv(const std::string& content);
std::string set_csv(const FiniteCompactSet& set);

}  // namespace quasifix
