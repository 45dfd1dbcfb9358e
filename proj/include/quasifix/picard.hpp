#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quasifix/contraction.hpp"
#include "quasifix/report.hpp"

namespace quasifix {

/// A Picard orbit x, Tx, T^2 x, ... with forward/backward step distances.
struct Trajectory {
  double x0 = 0.0;
  std::vector<double> iterates;  // x_0 .. x_{N+1}
  std::vector<double> q_fwd;     // q(x_n, x_{n+1}), n = 0..N
  std::vector<double> q_bwd;     // q(x_{n+1}, x_n)
  bool converged = false;
  std::optional<double> fixed_point;  // x_{N+1} when converged
  int iterations_used = 0;            // the stopping n (or max_iter)
};

/// Iterates T from x0, stopping at the first n with
/// max(q(x_n, x_{n+1}), q(x_{n+1}, x_n)) < tol, or at max_iter with
/// converged=false. Throws std::domain_error if the orbit leaves the
/// domain. Non-convergence is a normal outcome, not an error.
Trajectory iterate(const ContractionSystem& sys, double x0, double tol, int max_iter);

/// CSV form, header exactly "n,x,q_fwd,q_bwd"; the final row has empty
/// q fields (the orbit ends there).
std::string trajectory_csv(const Trajectory& t);

struct SeedRun {
  double x0 = 0.0;
  bool converged = false;
  std::optional<double> fixed_point;
  int iterations_used = 0;
};

struct UniquenessProbe {
  std::vector<SeedRun> runs;
  Report report;  // per-seed convergence checks plus "limits-agree"
  bool passed() const { return report.all_passed(); }
};

/// Runs iterate from every seed; passes when all converge and all
/// pairwise q between the fixed points stay below tol.
UniquenessProbe uniqueness_probe(const ContractionSystem& sys,
                                 std::span<const double> seeds, double tol,
                                 int max_iter);

}  // namespace quasifix
