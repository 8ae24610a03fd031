#pragma once

#include <string>
#include <vector>

#include "geon/billiard.hpp"
#include "geon/billiard_solver.hpp"

namespace geon::billiard {

/// Parses the billiard description:
///   wormhole: {mouth_a, mouth_b, radius, dt, frame_map}
///   ball: {position, velocity, radius, mass, birth_time?}
///   domain: {min, max}
///   horizon: number
///   solver: {grid, basin_threshold, tolerance, dedup_radius, max_events}
/// 2-vectors are [x, y] pairs. frame_map is "identity", {"rotation": a},
/// {"reflection": a}, or an explicit 2x2 row-major matrix. Missing solver
/// keys take the defaults from SolverOptions. Throws std::runtime_error on
/// malformed text and std::invalid_argument on invalid geometry.
BilliardConfig parse_billiard_config(const std::string& text,
                                     const std::string& origin);
BilliardConfig load_billiard_config(const std::string& path);

/// One row per solution: id, kind, ansatz params (empty for the trivial
/// evolution), residual norm, event count. 12-significant-digit numbers.
std::string solutions_csv(const std::vector<ConsistentSolution>& sols);

/// lineage,t,x,y,vx,vy rows at event boundaries for one solution.
std::string trajectory_csv(const ConsistentSolution& sol);

/// One line per event: time, kind, participating lineage ids.
std::string event_log_text(const ConsistentSolution& sol);

}  // namespace geon::billiard
