#pragma once

#include <cstdint>
#include <vector>

#include "quasifix/expr.hpp"
#include "quasifix/report.hpp"
#include "quasifix/simfun.hpp"
#include "quasifix/space.hpp"

namespace quasifix {

/// The control functions zeta, eta : (0,inf) -> R of the contraction
/// condition, given as expressions in t.
struct ControlPair {
  Expr zeta;
  Expr eta;

  ControlPair(Expr z, Expr e);
  double zeta_at(double t) const;
  double eta_at(double t) const;
};

/// A space, a self-map T, a simulation function and controls, oriented
/// either forward (eta applied to q(x,y)) or backward (eta applied to
/// q(y,x)). The defining inequality is
///   xi( zeta(q(Tx,Ty)), eta(q(x,y) or q(y,x)) ) >= 0.
struct ContractionSystem {
  QuasiMetricSpace space;
  Expr map;  // T, expression in x
  SimulationFunction xi;
  ControlPair controls;
  Direction orientation = Direction::forward;

  ContractionSystem(QuasiMetricSpace space_, Expr map_, SimulationFunction xi_,
                    ControlPair controls_, Direction orientation_ = Direction::forward);

  /// T(x); no domain check (callers decide whether escape is an error or
  /// report content).
  double apply_map(double x) const;
};

/// Evaluates the oriented inequality on all ordered grid pairs. Pairs with
/// q(Tx,Ty) = 0 or a zero eta-argument are vacuous (the controls are only
/// defined on (0,inf)). A failure records the lexicographically smallest
/// witness (x, y); expression errors surface as failures with the
/// offending pair. The comparison is exact: no slack on ">= 0".
Report verify_inequality(const ContractionSystem& sys, const SampleGrid& grid);

/// Audits the theorem hypotheses on sampled data:
///   (i)  zeta nondecreasing on the sorted positive sampled image of q,
///   (ii) eta(t) < zeta(t) strictly on the sampled image,
///   (iii) a sampled surrogate of the zeta sequence condition: along
///         seeded families x_n = L + a/n, y_n = L + b/n the far tails of
///         zeta must agree within 1e-6 and be positive.
Report audit_hypotheses(const ContractionSystem& sys, const SampleGrid& grid,
                        std::size_t family_count = 64, std::uint64_t seed = 0);

struct RegularityStep {
  int n;
  double q_fwd;  // q(T^n x0, T^{n+1} x0)
  double q_bwd;  // q(T^{n+1} x0, T^n x0)
};

struct RegularityProbe {
  std::vector<RegularityStep> steps;  // n = 0..n_max
  bool regular = false;               // both tails below 1e-9
};

/// Orbit step distances for n = 0..n_max; verdict "regular" when both
/// final step distances are below 1e-9. Throws std::domain_error if the
/// orbit leaves the domain.
RegularityProbe probe_asymptotic_regularity(const ContractionSystem& sys, double x0,
                                            int n_max);

/// Sequential continuity probe along x_n = x + c/n, judged at n = n_max
/// with threshold 1e-6 on both premise and conclusion. Checks "ff"
/// (q(x,x_n) -> 0 implies q(Tx,Tx_n) -> 0) and "bb" (the reversed
/// arguments); a check whose premise is not met at the tail is vacuous.
Report probe_continuity(const ContractionSystem& sys, double x, double c, long n_max);

}  // namespace quasifix
