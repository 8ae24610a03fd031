#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geon/billiard.hpp"

namespace geon::billiard {

/// One self-consistent evolution of the configured initial data. params is
/// empty for the trivial (no emergent ball) evolution.
struct ConsistentSolution {
  std::optional<AnsatzParams> params;
  double residual_norm = 0;
  int traversing_lineage = -1;  // ball that entered mouth B, -1 for none
  std::vector<Event> events;
  std::vector<TrajectorySample> trajectory;

  bool trivial() const { return !params.has_value(); }
};

/// Distance in scaled ansatz space (time over char_time, wrapped angles,
/// speed over char_speed); used for dedup and solver/oracle matching.
double params_distance(const BilliardConfig& c, const AnsatzParams& a,
                       const AnsatzParams& b);

/// Search box shared by the solver and the oracle so their root sets are
/// comparable: exit_time spans every exit that can cause an in-horizon
/// entry, angles span the circle, exit_speed spans [0.25, 2.5] times the
/// initial speed (single elastic exchanges stay comfortably inside).
struct ScanRange {
  double t_lo = 0, t_hi = 0;
  double s_lo = 0, s_hi = 0;
};
ScanRange scan_range(const BilliardConfig& c);

/// Enumerates self-consistent evolutions: includes the trivial evolution
/// when the undisturbed ball never enters mouth B, then grid-scans the
/// ansatz box, refines every cell whose residual norm is under
/// basin_threshold with damped Newton iteration (central-difference
/// Jacobian), deduplicates within dedup_radius, and re-evaluates each
/// survivor from scratch against the tolerance. Sorted trivial-first,
/// then by exit_time. Refinement failures are appended to `diagnostics`
/// when given, never fatal.
std::vector<ConsistentSolution> solve_self_consistent(
    const BilliardConfig& c, std::vector<std::string>* diagnostics = nullptr);

/// Independent check on the solver: scans the same box at `grid_scale`
/// times the configured resolution and polishes basin cells by
/// Hooke-Jeeves pattern search (coordinate probes plus pattern strides,
/// step halving, no derivatives, no Newton). Returns deduplicated roots
/// with residual norm within tolerance.
std::vector<AnsatzParams> oracle_grid_roots(const BilliardConfig& c,
                                            int grid_scale = 2);

}  // namespace geon::billiard
