#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quasifix/expr.hpp"
#include "quasifix/report.hpp"
#include "quasifix/space.hpp"

namespace quasifix {

/// A simulation function xi(s,t) on [0,inf)^2, either given directly as an
/// expression, built from one of the three stock families, or assembled as
/// a pointwise maximum of other simulation functions.
///
/// The defining conditions:
///   z1: xi(0,0) = 0
///   z2: xi(s,t) < t - s for all s,t > 0
///   z3: limsup xi(s_n,t_n) < 0 along positive sequences with a common
///       positive limit
/// are checked at desk scale by check_z_properties; z3 only through a
/// documented sampled surrogate, never as a proof.
class SimulationFunction {
 public:
  enum class Kind { expr, xi1, xi2, xi3, max_combined };

  /// Arbitrary xi(s,t).
  static SimulationFunction from_expr(Expr xi);
  /// xi1(s,t) = p(t) - q(s); p,q expressions in t.
  static SimulationFunction family_xi1(Expr p, Expr q);
  /// xi2(s,t) = t - f(s,t)/g(s,t) * s; requires g > 0 on the sampled
  /// construction domain, division by zero at runtime is a hard error.
  static SimulationFunction family_xi2(Expr f, Expr g);
  /// xi3(s,t) = t - h(t) - s; h expression in t.
  static SimulationFunction family_xi3(Expr h);
  /// Pointwise maximum of a nonempty list.
  static SimulationFunction max_combined(std::vector<SimulationFunction> parts);

  Kind kind() const { return kind_; }
  const std::vector<SimulationFunction>& parts() const { return parts_; }
  const std::vector<Expr>& exprs() const { return exprs_; }

  /// xi(s, t); s,t must be >= 0.
  double eval(double s, double t) const;

  /// z1 exactly at (0,0); z2 strictly over the positive grid product;
  /// z3 on `family_count` seeded surrogate families s_n = L + a/n,
  /// t_n = L + b/n with L in (0, max(t_grid)], a,b in [-L/2, L/2],
  /// requiring max xi over n in [900,1000] to be negative.
  Report check_z_properties(const SampleGrid& s_grid, const SampleGrid& t_grid,
                            std::size_t family_count = 64,
                            std::uint64_t seed = 0) const;

 private:
  SimulationFunction() = default;
  Kind kind_ = Kind::expr;
  std::vector<Expr> exprs_;                // role depends on kind
  std::vector<SimulationFunction> parts_;  // max_combined only
};

}  // namespace quasifix
