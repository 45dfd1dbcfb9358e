#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "quasifix/contraction.hpp"
#include "quasifix/expr.hpp"
#include "quasifix/hyperspace.hpp"
#include "quasifix/simfun.hpp"
#include "quasifix/space.hpp"

namespace quasifix {

/// One constituent map of an IFS with its own simulation function and eta.
struct IfsMap {
  Expr map;               // w_i, expression in x
  SimulationFunction xi;  // xi_i
  Expr eta;               // eta_i, expression in t
};

/// An iterated function system {X; w_1..w_N} of contractions sharing one
/// zeta. Induces the fractal operator W(A) = union of the w_i images.
class IfsSystem {
 public:
  IfsSystem(QuasiMetricSpace space, Expr zeta, std::vector<IfsMap> maps);

  const QuasiMetricSpace& space() const { return space_; }
  const Expr& zeta() const { return zeta_; }
  const std::vector<IfsMap>& maps() const { return maps_; }
  const SimulationFunction& combined_xi() const { return combined_xi_; }

  double zeta_at(double t) const;
  double eta_at(std::size_t i, double t) const;
  /// max_i eta_i(t), the eta of the induced hyperspace contraction.
  double combined_eta(double t) const;
  double apply_map(std::size_t i, double x) const;

  /// The point-level contraction system of map i (shared space and zeta,
  /// per-map xi and eta, forward orientation).
  ContractionSystem map_system(std::size_t i) const;

 private:
  QuasiMetricSpace space_;
  Expr zeta_;
  std::vector<IfsMap> maps_;
  SimulationFunction combined_xi_;
};

struct OperatorResult {
  FiniteCompactSet set;
  std::optional<double> mesh;  // set when pruning snapped to a mesh
};

/// W(A): union of the map images, sorted and exactly deduplicated.
/// Throws std::domain_error if an image point escapes the domain.
FiniteCompactSet apply_operator(const IfsSystem& ifs, const FiniteCompactSet& a);

/// W(A) with the pruning rule: if the union exceeds max_points, points
/// snap down to the mesh lo + k*(domain length)/max_points and are
/// deduplicated again. Snapping is the only tolerance-bearing step.
/// Throws std::length_error if the set still exceeds max_points.
OperatorResult apply_operator_pruned(const IfsSystem& ifs, const FiniteCompactSet& a,
                                     std::size_t max_points);

struct AttractorRun {
  FiniteCompactSet initial;
  FiniteCompactSet previous;  // second-to-last iterate (ring of two)
  FiniteCompactSet final;
  std::vector<double> h_trace;    // h_q(A_n, A_{n+1})
  std::vector<double> sup_trace;  // max of A_n, n = 0..stopped_at
  std::vector<double> inf_trace;  // min of A_n
  int stopped_at = 0;             // W applications performed
  bool converged = false;
  std::optional<double> mesh;     // recorded when pruning triggered
};

/// Iterates W from A0, stopping when h_q(A_n, A_{n+1}) < tol or at
/// max_iter. Set-size errors report the iteration index.
AttractorRun compute_attractor(const IfsSystem& ifs, const FiniteCompactSet& a0,
                               double tol, int max_iter, std::size_t max_points);

/// For each sampled pair (A,B): the combined hyperspace inequality
///   xi(zeta(h_q(W A, W B)), max_i eta_i(h_q(A,B))) >= 0
/// plus each per-map induced inequality, with the same vacuous-pair
/// convention as the point-level checker.
Report verify_hyperspace_contraction(
    const IfsSystem& ifs,
    std::span<const std::pair<FiniteCompactSet, FiniteCompactSet>> samples);

}  // namespace quasifix
