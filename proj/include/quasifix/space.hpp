#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasifix/expr.hpp"
#include "quasifix/report.hpp"

namespace quasifix {

enum class Direction { forward, backward };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
};

/// Finite ascending list of sample points inside a domain, plus the seed
/// used for the random refinement. All sampling-based checks run on one
/// of these.
struct SampleGrid {
  std::vector<double> points;
  std::uint64_t seed = 0;

  /// Default grid: n_equi equispaced points (endpoints included) plus
  /// n_random seeded uniform draws, sorted and deduplicated.
  static SampleGrid standard(Interval domain, std::size_t n_equi = 101,
                             std::size_t n_random = 100, std::uint64_t seed = 0);
  static SampleGrid equispaced(Interval domain, std::size_t n);
  static SampleGrid of(std::vector<double> points);

  /// Grid with midpoints of consecutive points inserted (used to probe
  /// stability of the delta estimate under refinement).
  SampleGrid refined() const;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

struct DeltaEstimate {
  double value = 0.0;        // max over sampled pairs of q(x,y)/q(y,x)
  bool unbounded = false;    // some pair has q(y,x)=0 with q(x,y)>0
  double refined_value = 0.0;
  bool unstable = false;     // estimate grows materially under grid refinement
};

/// A quasi-metric on a closed real interval, defined piecewise by order:
/// an expression for x>y, one for x<y, and 0 forced on the diagonal.
/// Presets: "sorgenfrey", "weighted-abs" (parameter lambda), "example3"
/// (2x / y), "example4" (8x / 4y).
class QuasiMetricSpace {
 public:
  enum class Native { generic, sorgenfrey, weighted_abs, example3, example4 };

  static QuasiMetricSpace piecewise(Interval domain, Expr gt, Expr lt,
                                    std::optional<double> declared_delta = {});
  /// `lambda` is only meaningful for "weighted-abs".
  static QuasiMetricSpace preset(const std::string& name, double lambda = 0.0,
                                 Interval domain = {0.0, 1.0});

  Interval domain() const { return domain_; }
  std::optional<double> declared_delta() const { return declared_delta_; }
  const std::string& name() const { return name_; }
  Native native() const { return native_; }
  double lambda() const { return lambda_; }
  const std::optional<Expr>& gt_expr() const { return gt_; }
  const std::optional<Expr>& lt_expr() const { return lt_; }

  /// q(x, y). Throws std::out_of_range on out-of-domain arguments and
  /// EvalError when a user expression yields a negative value (reported
  /// as an axiom violation).
  double eval_q(double x, double y) const;

  /// q without the non-negativity guard; used by the axiom checker so
  /// violations become report content instead of exceptions.
  double raw_q(double x, double y) const;

  /// Forward: q(center, point) < radius. Backward: q(point, center) < radius.
  bool ball_contains(double center, double radius, double point, Direction dir) const;

  /// Checks non-negativity, identity of indiscernibles (both directions),
  /// the triangle inequality over all grid triples (1e-12 slack), and
  /// declared delta-symmetry when present. Witnesses are the
  /// lexicographically smallest failing tuples.
  Report check_axioms(const SampleGrid& grid) const;

  DeltaEstimate estimate_delta(const SampleGrid& grid) const;

 private:
  QuasiMetricSpace() = default;

  Interval domain_;
  Native native_ = Native::generic;
  double lambda_ = 0.0;
  std::optional<Expr> gt_, lt_;
  std::optional<double> declared_delta_;
  std::string name_ = "piecewise";
};

}  // namespace quasifix
