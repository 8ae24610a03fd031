#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geon::billiard {

struct Vec2 {
  double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Wraps an angle difference into (-pi, pi].
double wrap_angle(double a);

/// Orthogonal 2x2 map applied to mouth-relative coordinates when a ball
/// traverses the wormhole.
struct FrameMap {
  std::array<std::array<double, 2>, 2> m{{{1, 0}, {0, 1}}};

  Vec2 apply(Vec2 v) const;
  bool is_isometry(double tol) const;

  static FrameMap identity();
  static FrameMap rotation(double angle);
  /// Reflection across the line through the origin at `axis_angle`.
  static FrameMap reflection(double axis_angle);
};

/// Wormhole with one-way mouths: mouth B absorbs (a ball whose center
/// crosses the B rim inward traverses and is removed), mouth A emits. The
/// traversal takes the ball back in time by `time_shift`. Entry and exit
/// points are taken where the ball CENTER crosses the rim circle.
struct WormholeSpec {
  Vec2 mouth_a_center;
  Vec2 mouth_b_center;
  double mouth_radius = 1;
  double time_shift = 1;  // exit precedes entry by this much
  FrameMap frame_map = FrameMap::identity();

  /// Throws std::invalid_argument on non-positive radius or shift,
  /// overlapping mouths, or a frame_map that fails the isometry check
  /// (deviation from orthogonality above 1e-12).
  void validate() const;
};

struct BallState {
  Vec2 position;
  Vec2 velocity;
  double radius = 0.1;
  double mass = 1;
  double birth_time = 0;
};

struct SolverOptions {
  int grid = 16;               // scan points per ansatz dimension
  double basin_threshold = 0.8;  // residual norm admitting a refinement start
  double tolerance = 1e-10;    // accepted residual norm
  double dedup_radius = 0.05;  // scaled-parameter distance merging two roots
  int max_events = 64;         // runaway guard per simulation
};

struct BilliardConfig {
  WormholeSpec wormhole;
  BallState ball;  // the one ball given by the initial data
  Vec2 domain_min{-10, -10};
  Vec2 domain_max{10, 10};
  double horizon = 10;  // simulation ends at ball.birth_time + horizon
  SolverOptions solver;

  /// Characteristic scales that make residuals dimensionless.
  double char_time() const { return wormhole.time_shift; }
  double char_speed() const { return norm(ball.velocity); }

  /// Throws std::invalid_argument describing the first violated invariant
  /// (wormhole validity, ball fits through a mouth, moving ball, horizon
  /// longer than the time shift, ball inside the domain).
  void validate() const;
};

/// The four unknowns of a self-interaction ansatz: the ball posited to
/// emerge from mouth A before anything has entered mouth B.
struct AnsatzParams {
  double exit_time = 0;       // absolute time of emergence
  double exit_angle = 0;      // rim angle on mouth A, atan2 convention
  double exit_direction = 0;  // heading of the emerging velocity
  double exit_speed = 1;
};

enum class EventKind { collision, mouth_entry, mouth_exit, domain_exit };

const char* event_kind_name(EventKind k);

struct Event {
  double time = 0;
  EventKind kind = EventKind::collision;
  std::vector<int> balls;  // participating lineage ids
};

/// Ball state snapshot written at every event boundary, forming the
/// piecewise-linear trajectory of each lineage.
struct TrajectorySample {
  int lineage = 0;
  double t = 0;
  Vec2 position;
  Vec2 velocity;
};

struct SimResult {
  std::vector<Event> events;
  std::vector<TrajectorySample> trajectory;
  int b_entry_count = 0;
  // First entry into mouth B, meaningful when b_entry_count > 0.
  double entry_time = 0;
  BallState entry_state;
  int entry_lineage = -1;
};

/// Free inertial motion. Throws on negative dt.
BallState advance_free(const BallState& s, double dt);

/// Frictionless elastic collision of two disks in contact: the normal
/// velocity components are exchanged with mass weighting, tangential
/// components pass through. Throws std::invalid_argument when the disks
/// are not touching (center distance off r1+r2 by more than 1e-9) or not
/// approaching.
std::pair<BallState, BallState> collide_elastic(const BallState& s1,
                                                const BallState& s2);

/// Maps a ball entering mouth B to the ball leaving mouth A: the
/// mouth-relative position and the radially-reflected velocity are pushed
/// through frame_map, and exit_time = entry_time - time_shift exactly.
/// With the identity frame_map a radial entry at rim angle t exits at rim
/// angle t moving radially outward. Throws when the center is off the B
/// rim by more than 1e-9 or the velocity does not point into the mouth.
std::pair<BallState, double> wormhole_map(const WormholeSpec& w,
                                          const BallState& entry,
                                          double entry_time);

/// Event-driven evolution from the initial ball plus, optionally, a
/// posited emergent ball (which also logs its mouth_exit). Repeatedly
/// advances to the earliest of ball-ball contact, mouth-B rim crossing, or
/// domain exit, until the horizon. Grazing contacts (discriminant within
/// 1e-12 of zero) count as misses. Throws std::runtime_error when the
/// event count exceeds c.solver.max_events.
SimResult simulate(const BilliardConfig& c,
                   const std::optional<AnsatzParams>& emergent);

/// Residual of the self-consistency loop for ansatz p, made dimensionless
/// with char_time / char_speed; angle components are wrapped differences.
/// Infeasible (no components) when the simulated evolution does not
/// produce exactly one mouth-B entry, when exit_speed is non-positive, or
/// when exit_time lies outside [birth - time_shift, birth + horizon -
/// time_shift]; infeasibility is distinct from a large residual.
struct ResidualResult {
  bool feasible = false;
  std::array<double, 4> components{};
  double norm = 0;
};

ResidualResult consistency_residual(const BilliardConfig& c,
                                    const AnsatzParams& p);

}  // namespace geon::billiard
