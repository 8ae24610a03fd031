#include "geon/billiard_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "geon/numfmt.hpp"

namespace geon::billiard {

namespace {

using Params4 = std::array<double, 4>;  // exit_time, angle, direction, speed

AnsatzParams to_params(const Params4& x) {
  return AnsatzParams{x[0], wrap_angle(x[1]), wrap_angle(x[2]), x[3]};
}

ResidualResult eval(const BilliardConfig& c, const Params4& x) {
  return consistency_residual(c, to_params(x));
}

std::string params_str(const AnsatzParams& p) {
  return "(" + g12(p.exit_time) + ", " + g12(p.exit_angle) + ", " +
         g12(p.exit_direction) + ", " + g12(p.exit_speed) + ")";
}

// Grid axes over the scan box: times and speeds inclusive, angles periodic
// over [-pi, pi).
struct GridAxes {
  std::vector<double> t, ang, s;
};

GridAxes grid_axes(const BilliardConfig& c, int n) {
  ScanRange r = scan_range(c);
  GridAxes g;
  for (int i = 0; i < n; ++i) {
    g.t.push_back(r.t_lo + (r.t_hi - r.t_lo) * i / (n - 1));
    g.ang.push_back(-M_PI + 2 * M_PI * i / n);
    g.s.push_back(r.s_lo + (r.s_hi - r.s_lo) * i / (n - 1));
  }
  return g;
}

// Damped Newton iteration with a central-difference Jacobian; steps are
// halved until the residual norm drops. True when x ends within tol.
bool newton_refine(const BilliardConfig& c, Params4& x, double tol) {
  const Params4 h = {1e-7 * c.char_time(), 1e-7 * 2 * M_PI, 1e-7 * 2 * M_PI,
                     1e-7 * c.char_speed()};
  ResidualResult r = eval(c, x);
  if (!r.feasible) return false;
  for (int iter = 0; iter < 60; ++iter) {
    if (r.norm <= tol) return true;
    Eigen::Matrix4d jac;
    for (int k = 0; k < 4; ++k) {
      Params4 xp = x, xm = x;
      xp[k] += h[k];
      xm[k] -= h[k];
      ResidualResult rp = eval(c, xp), rm = eval(c, xm);
      // Fall back to a one-sided difference at a feasibility boundary.
      const ResidualResult& hi = rp.feasible ? rp : r;
      const ResidualResult& lo = rm.feasible ? rm : r;
      double span = (rp.feasible ? h[k] : 0.0) + (rm.feasible ? h[k] : 0.0);
      if (span == 0) return false;
      for (int row = 0; row < 4; ++row) {
        double d = hi.components[row] - lo.components[row];
        if (row == 1 || row == 2) d = wrap_angle(d);
        jac(row, k) = d / span;
      }
    }
    Eigen::Vector4d rhs;
    for (int row = 0; row < 4; ++row) rhs(row) = -r.components[row];
    Eigen::Vector4d step = jac.colPivHouseholderQr().solve(rhs);
    if (!step.allFinite()) return false;
    bool moved = false;
    for (double lambda = 1.0; lambda > 1e-4; lambda /= 2) {
      Params4 xn = x;
      for (int k = 0; k < 4; ++k) xn[k] += lambda * step(k);
      xn[1] = wrap_angle(xn[1]);
      xn[2] = wrap_angle(xn[2]);
      ResidualResult rn = eval(c, xn);
      if (rn.feasible && rn.norm < r.norm) {
        x = xn;
        r = rn;
        moved = true;
        break;
      }
    }
    if (!moved) return r.norm <= tol;
  }
  return r.norm <= tol;
}

struct RootSet {
  const BilliardConfig& c;
  double radius;
  std::vector<std::pair<AnsatzParams, double>> roots;  // params, norm

  // Keeps the better-converged representative of two nearby roots.
  void insert(const AnsatzParams& p, double norm) {
    for (auto& [q, qn] : roots)
      if (params_distance(c, p, q) <= radius) {
        if (norm < qn) {
          q = p;
          qn = norm;
        }
        return;
      }
    roots.emplace_back(p, norm);
  }

  bool near_existing(const AnsatzParams& p) const {
    for (const auto& [q, qn] : roots)
      if (params_distance(c, p, q) <= radius) return true;
    return false;
  }
};

// Derivative-free polish for the oracle (Hooke-Jeeves pattern search).
// Greedy per-axis probes pick a descent direction; each success is then
// followed by pattern strides that repeat the accumulated displacement,
// which is what gets through the tilted narrow valleys where plain axis
// moves creep. All steps halve when a round fails. Coordinates are kept
// unwrapped so displacements stay meaningful across the angle seam; the
// residual itself is periodic. Starts that descend into a root already in
// `found` are abandoned: the root is recorded, only the tail of the
// refinement would be repeated.
bool pattern_refine(const BilliardConfig& c, Params4& x, const Params4& step,
                    double tol, const RootSet& found) {
  auto norm_at = [&](const Params4& p) {
    ResidualResult r = eval(c, p);
    return r.feasible ? r.norm : std::numeric_limits<double>::infinity();
  };
  // Greedy exploration: accept the first improving probe on each axis.
  auto explore = [&](Params4 p, double f, double& fp) {
    fp = norm_at(p);
    for (int k = 0; k < 4; ++k)
      for (double sign : {1.0, -1.0}) {
        Params4 q = p;
        q[k] += sign * f * step[k];
        double fq = norm_at(q);
        if (fq < fp) {
          p = q;
          fp = fq;
          break;
        }
      }
    return p;
  };

  double fx = norm_at(x);
  if (!std::isfinite(fx)) return false;
  double factor = 1.0;
  for (int round = 0; round < 600; ++round) {
    if (fx <= tol) return true;
    if (found.near_existing(to_params(x))) return false;
    // Tiny steps while the residual is still large: stalled, give up.
    if (factor < 1e-7 && fx > 1e-3) return false;
    if (factor < 1e-14) break;
    double fn;
    Params4 xn = explore(x, factor, fn);
    if (fn >= fx) {
      factor /= 2;
      continue;
    }
    for (int chain = 0; chain < 50 && fn < fx && fn > tol; ++chain) {
      Params4 cand;
      for (int k = 0; k < 4; ++k) cand[k] = xn[k] + (xn[k] - x[k]);
      x = xn;
      fx = fn;
      double fc;
      Params4 xc = explore(cand, factor, fc);
      if (fc >= fx) break;
      xn = xc;
      fn = fc;
    }
    if (fn < fx) {
      x = xn;
      fx = fn;
    }
  }
  return fx <= tol;
}

}  // namespace

double params_distance(const BilliardConfig& c, const AnsatzParams& a,
                       const AnsatzParams& b) {
  double dt = (a.exit_time - b.exit_time) / c.char_time();
  double da = wrap_angle(a.exit_angle - b.exit_angle);
  double dd = wrap_angle(a.exit_direction - b.exit_direction);
  double ds = (a.exit_speed - b.exit_speed) / c.char_speed();
  return std::sqrt(dt * dt + da * da + dd * dd + ds * ds);
}

ScanRange scan_range(const BilliardConfig& c) {
  ScanRange r;
  r.t_lo = c.ball.birth_time - c.wormhole.time_shift;
  r.t_hi = c.ball.birth_time + c.horizon - c.wormhole.time_shift;
  r.s_lo = 0.25 * c.char_speed();
  r.s_hi = 2.5 * c.char_speed();
  return r;
}

std::vector<ConsistentSolution> solve_self_consistent(
    const BilliardConfig& c, std::vector<std::string>* diagnostics) {
  c.validate();
  std::vector<ConsistentSolution> out;

  SimResult undisturbed = simulate(c, std::nullopt);
  if (undisturbed.b_entry_count == 0) {
    ConsistentSolution trivial;
    trivial.events = std::move(undisturbed.events);
    trivial.trajectory = std::move(undisturbed.trajectory);
    out.push_back(std::move(trivial));
  } else if (diagnostics) {
    diagnostics->push_back(
        "trivial evolution rejected: undisturbed ball enters mouth B at t=" +
        g12(undisturbed.entry_time));
  }

  const int n = std::max(2, c.solver.grid);
  GridAxes axes = grid_axes(c, n);
  RootSet roots{c, c.solver.dedup_radius, {}};
  for (double t : axes.t)
    for (double a : axes.ang)
      for (double d : axes.ang)
        for (double s : axes.s) {
          Params4 x{t, a, d, s};
          ResidualResult r = eval(c, x);
          if (!r.feasible || r.norm >= c.solver.basin_threshold) continue;
          if (roots.near_existing(to_params(x))) continue;
          Params4 refined = x;
          if (newton_refine(c, refined, c.solver.tolerance)) {
            ResidualResult rr = eval(c, refined);
            roots.insert(to_params(refined), rr.norm);
          } else if (diagnostics) {
            diagnostics->push_back("refinement from " + params_str(to_params(x)) +
                                   " did not converge");
          }
        }

  for (const auto& [params, norm] : roots.roots) {
    // Fresh end-to-end evaluation; the stored norm is not reused.
    ResidualResult rr = consistency_residual(c, params);
    if (!rr.feasible || rr.norm > c.solver.tolerance) {
      if (diagnostics)
        diagnostics->push_back("root " + params_str(params) +
                               " failed re-evaluation");
      continue;
    }
    SimResult sim = simulate(c, params);
    ConsistentSolution sol;
    sol.params = params;
    sol.residual_norm = rr.norm;
    sol.traversing_lineage = sim.entry_lineage;
    sol.events = std::move(sim.events);
    sol.trajectory = std::move(sim.trajectory);
    out.push_back(std::move(sol));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const ConsistentSolution& a, const ConsistentSolution& b) {
                     if (a.trivial() != b.trivial()) return a.trivial();
                     if (a.trivial()) return false;
                     return a.params->exit_time < b.params->exit_time;
                   });
  return out;
}

std::vector<AnsatzParams> oracle_grid_roots(const BilliardConfig& c,
                                            int grid_scale) {
  c.validate();
  const int n = std::max(2, grid_scale * c.solver.grid);
  GridAxes axes = grid_axes(c, n);
  ScanRange range = scan_range(c);
  // One grid cell in each dimension seeds the compass steps.
  Params4 cell = {(range.t_hi - range.t_lo) / (n - 1), 2 * M_PI / n,
                  2 * M_PI / n, (range.s_hi - range.s_lo) / (n - 1)};
  RootSet roots{c, c.solver.dedup_radius, {}};
  for (double t : axes.t)
    for (double a : axes.ang)
      for (double d : axes.ang)
        for (double s : axes.s) {
          Params4 x{t, a, d, s};
          ResidualResult r = eval(c, x);
          if (!r.feasible || r.norm >= c.solver.basin_threshold) continue;
          if (roots.near_existing(to_params(x))) continue;
          Params4 refined = x;
          if (pattern_refine(c, refined, cell, c.solver.tolerance, roots)) {
            ResidualResult rr = eval(c, refined);
            roots.insert(to_params(refined), rr.norm);
          }
        }
  std::vector<AnsatzParams> out;
  for (const auto& [params, norm] : roots.roots) out.push_back(params);
  std::sort(out.begin(), out.end(),
            [](const AnsatzParams& a, const AnsatzParams& b) {
              return a.exit_time < b.exit_time;
            });
  return out;
}

}  // namespace geon::billiard
