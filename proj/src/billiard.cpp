#include "geon/billiard.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace geon::billiard {

namespace {

constexpr double kGrazeTol = 1e-12;   // discriminants this close to zero miss
constexpr double kTimeTol = 1e-12;    // minimum advance to the next event
constexpr double kContactTol = 1e-9;  // on-rim / in-contact position check
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("billiard: " + what);
}

// Earliest u > 0 with |q + v u| = R starting outside the circle, or kInf.
// The smaller quadratic root is the inward crossing.
double circle_entry_u(Vec2 q, Vec2 v, double R) {
  double a = dot(v, v);
  if (a == 0) return kInf;
  double c = dot(q, q) - R * R;
  if (c <= kContactTol) return kInf;  // inside or on the rim: no entry
  double b = 2 * dot(q, v);
  double disc = b * b - 4 * a * c;
  if (disc <= kGrazeTol) return kInf;
  double u = (-b - std::sqrt(disc)) / (2 * a);
  return u > kTimeTol ? u : kInf;
}

// Earliest u > 0 with the two centers at distance r1+r2, or kInf.
double contact_u(Vec2 dp, Vec2 dv, double contact) {
  double a = dot(dv, dv);
  if (a == 0) return kInf;
  double b = 2 * dot(dp, dv);
  double c = dot(dp, dp) - contact * contact;
  double disc = b * b - 4 * a * c;
  if (disc <= kGrazeTol) return kInf;
  double u = (-b - std::sqrt(disc)) / (2 * a);
  return u > kTimeTol ? u : kInf;
}

// Earliest u > 0 at which the center crosses the bounding box, or kInf.
double box_exit_u(const BallState& s, Vec2 lo, Vec2 hi) {
  double u = kInf;
  if (s.velocity.x > 0) u = std::min(u, (hi.x - s.position.x) / s.velocity.x);
  if (s.velocity.x < 0) u = std::min(u, (lo.x - s.position.x) / s.velocity.x);
  if (s.velocity.y > 0) u = std::min(u, (hi.y - s.position.y) / s.velocity.y);
  if (s.velocity.y < 0) u = std::min(u, (lo.y - s.position.y) / s.velocity.y);
  return u > kTimeTol ? u : kInf;
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a + M_PI, 2 * M_PI);
  if (r <= 0) r += 2 * M_PI;
  return r - M_PI;
}

Vec2 FrameMap::apply(Vec2 v) const {
  return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
}

bool FrameMap::is_isometry(double tol) const {
  // Columns orthonormal: M^T M = I.
  double c00 = m[0][0] * m[0][0] + m[1][0] * m[1][0];
  double c11 = m[0][1] * m[0][1] + m[1][1] * m[1][1];
  double c01 = m[0][0] * m[0][1] + m[1][0] * m[1][1];
  return std::abs(c00 - 1) <= tol && std::abs(c11 - 1) <= tol &&
         std::abs(c01) <= tol;
}

FrameMap FrameMap::identity() { return FrameMap{}; }

FrameMap FrameMap::rotation(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return FrameMap{{{{c, -s}, {s, c}}}};
}

FrameMap FrameMap::reflection(double axis_angle) {
  double c = std::cos(2 * axis_angle), s = std::sin(2 * axis_angle);
  return FrameMap{{{{c, s}, {s, -c}}}};
}

void WormholeSpec::validate() const {
  if (mouth_radius <= 0) fail("mouth radius must be positive");
  if (time_shift <= 0) fail("time shift must be positive");
  if (norm(mouth_a_center - mouth_b_center) <= 2 * mouth_radius)
    fail("wormhole mouths overlap");
  if (!frame_map.is_isometry(1e-12))
    fail("frame map is not an isometry");
}

void BilliardConfig::validate() const {
  wormhole.validate();
  if (ball.radius <= 0) fail("ball radius must be positive");
  if (ball.radius >= wormhole.mouth_radius)
    fail("ball does not fit through a mouth");
  if (ball.mass <= 0) fail("ball mass must be positive");
  if (char_speed() <= 0) fail("initial ball must be moving");
  if (horizon <= wormhole.time_shift)
    fail("horizon must exceed the time shift");
  if (domain_min.x >= domain_max.x || domain_min.y >= domain_max.y)
    fail("domain box is empty");
  if (ball.position.x <= domain_min.x || ball.position.x >= domain_max.x ||
      ball.position.y <= domain_min.y || ball.position.y >= domain_max.y)
    fail("initial ball must start inside the domain");
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::collision: return "collision";
    case EventKind::mouth_entry: return "mouth_entry";
    case EventKind::mouth_exit: return "mouth_exit";
    case EventKind::domain_exit: return "domain_exit";
  }
  return "unknown";
}

BallState advance_free(const BallState& s, double dt) {
  if (dt < 0) fail("advance_free needs dt >= 0");
  BallState out = s;
  out.position = s.position + dt * s.velocity;
  return out;
}

std::pair<BallState, BallState> collide_elastic(const BallState& s1,
                                                const BallState& s2) {
  Vec2 d = s2.position - s1.position;
  double dist = norm(d);
  double contact = s1.radius + s2.radius;
  if (std::abs(dist - contact) > kContactTol)
    fail("balls are not in contact");
  Vec2 n = (1.0 / dist) * d;
  if (dot(s1.velocity - s2.velocity, n) <= 0)
    fail("balls are not approaching");
  // Elastic exchange of the normal components, 1D two-body formula.
  double m1 = s1.mass, m2 = s2.mass;
  double u1 = dot(s1.velocity, n), u2 = dot(s2.velocity, n);
  double w1 = ((m1 - m2) * u1 + 2 * m2 * u2) / (m1 + m2);
  double w2 = ((m2 - m1) * u2 + 2 * m1 * u1) / (m1 + m2);
  BallState o1 = s1, o2 = s2;
  o1.velocity = s1.velocity + (w1 - u1) * n;
  o2.velocity = s2.velocity + (w2 - u2) * n;
  return {o1, o2};
}

std::pair<BallState, double> wormhole_map(const WormholeSpec& w,
                                          const BallState& entry,
                                          double entry_time) {
  Vec2 rel = entry.position - w.mouth_b_center;
  double r = norm(rel);
  if (std::abs(r - w.mouth_radius) > kContactTol)
    fail("entry center is not on the mouth B rim");
  Vec2 n = (1.0 / r) * rel;  // outward normal at the entry point
  double vn = dot(entry.velocity, n);
  if (vn >= 0) fail("entry velocity does not point into the mouth");
  // Mirror the radial component so the mapped velocity points out of
  // mouth A; the frame map then carries B-relative data to A-relative.
  Vec2 reflected = entry.velocity - (2 * vn) * n;
  BallState exit = entry;
  exit.position = w.mouth_a_center + w.frame_map.apply(rel);
  exit.velocity = w.frame_map.apply(reflected);
  exit.birth_time = entry_time - w.time_shift;
  return {exit, entry_time - w.time_shift};
}

SimResult simulate(const BilliardConfig& c,
                   const std::optional<AnsatzParams>& emergent) {
  c.validate();
  struct Active {
    BallState s;
    double state_time;  // time at which s.position is current
    int lineage;
    bool alive;
  };
  auto at = [](const Active& b, double t) {
    return b.s.position + (t - b.state_time) * b.s.velocity;
  };

  SimResult res;
  std::vector<Active> balls;
  const double t_end = c.ball.birth_time + c.horizon;

  balls.push_back({c.ball, c.ball.birth_time, 0, true});
  if (emergent) {
    const AnsatzParams& p = *emergent;
    BallState e;
    e.position =
        c.wormhole.mouth_a_center +
        c.wormhole.mouth_radius * Vec2{std::cos(p.exit_angle), std::sin(p.exit_angle)};
    e.velocity = p.exit_speed *
                 Vec2{std::cos(p.exit_direction), std::sin(p.exit_direction)};
    e.radius = c.ball.radius;
    e.mass = c.ball.mass;
    e.birth_time = p.exit_time;
    balls.push_back({e, p.exit_time, 1, true});
    res.events.push_back({p.exit_time, EventKind::mouth_exit, {1}});
  }
  for (const Active& b : balls)
    res.trajectory.push_back({b.lineage, b.s.birth_time, b.s.position, b.s.velocity});

  struct Candidate {
    double time = kInf;
    int rank = 0;  // tie-break: collision < mouth_entry < domain_exit
    EventKind kind = EventKind::collision;
    std::size_t i = 0, j = 0;
  };

  while (true) {
    Candidate next;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      if (!balls[i].alive) continue;
      double ti = balls[i].state_time;
      double u = circle_entry_u(at(balls[i], ti) - c.wormhole.mouth_b_center,
                                balls[i].s.velocity, c.wormhole.mouth_radius);
      if (ti + u < next.time)
        next = {ti + u, 1, EventKind::mouth_entry, i, i};
      u = box_exit_u(balls[i].s, c.domain_min, c.domain_max);
      if (ti + u < next.time)
        next = {ti + u, 2, EventKind::domain_exit, i, i};
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        if (!balls[j].alive) continue;
        double ts = std::max(balls[i].state_time, balls[j].state_time);
        double uc = contact_u(at(balls[i], ts) - at(balls[j], ts),
                              balls[i].s.velocity - balls[j].s.velocity,
                              balls[i].s.radius + balls[j].s.radius);
        // Strictly earlier, or an equal-time candidate of lower rank.
        if (ts + uc < next.time ||
            (ts + uc == next.time && next.rank > 0))
          next = {ts + uc, 0, EventKind::collision, i, j};
      }
    }
    if (next.time > t_end) break;
    if (static_cast<int>(res.events.size()) >= c.solver.max_events)
      throw std::runtime_error("billiard: event budget exceeded (runaway)");

    Active& bi = balls[next.i];
    bi.s.position = at(bi, next.time);
    bi.state_time = next.time;
    switch (next.kind) {
      case EventKind::collision: {
        Active& bj = balls[next.j];
        bj.s.position = at(bj, next.time);
        bj.state_time = next.time;
        auto [n1, n2] = collide_elastic(bi.s, bj.s);
        bi.s = n1;
        bj.s = n2;
        res.events.push_back(
            {next.time, EventKind::collision, {bi.lineage, bj.lineage}});
        res.trajectory.push_back({bi.lineage, next.time, bi.s.position, bi.s.velocity});
        res.trajectory.push_back({bj.lineage, next.time, bj.s.position, bj.s.velocity});
        break;
      }
      case EventKind::mouth_entry: {
        res.events.push_back({next.time, EventKind::mouth_entry, {bi.lineage}});
        res.trajectory.push_back({bi.lineage, next.time, bi.s.position, bi.s.velocity});
        if (res.b_entry_count++ == 0) {
          res.entry_time = next.time;
          res.entry_state = bi.s;
          res.entry_lineage = bi.lineage;
        }
        bi.alive = false;
        break;
      }
      case EventKind::domain_exit: {
        res.events.push_back({next.time, EventKind::domain_exit, {bi.lineage}});
        res.trajectory.push_back({bi.lineage, next.time, bi.s.position, bi.s.velocity});
        bi.alive = false;
        break;
      }
      case EventKind::mouth_exit:
        break;  // never generated by the candidate scan
    }
  }

  // Close every surviving worldline at the horizon. A posited ball born
  // beyond the horizon never ran; leave its birth sample as is.
  for (Active& b : balls) {
    if (!b.alive || b.state_time > t_end) continue;
    b.s.position = at(b, t_end);
    b.state_time = t_end;
    res.trajectory.push_back({b.lineage, t_end, b.s.position, b.s.velocity});
  }

  std::stable_sort(res.events.begin(), res.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  std::stable_sort(res.trajectory.begin(), res.trajectory.end(),
                   [](const TrajectorySample& a, const TrajectorySample& b) {
                     return a.lineage != b.lineage ? a.lineage < b.lineage
                                                  : a.t < b.t;
                   });
  return res;
}

ResidualResult consistency_residual(const BilliardConfig& c,
                                    const AnsatzParams& p) {
  ResidualResult rr;
  if (p.exit_speed <= 0) return rr;
  const double lo = c.ball.birth_time - c.wormhole.time_shift;
  const double hi = c.ball.birth_time + c.horizon - c.wormhole.time_shift;
  if (p.exit_time < lo || p.exit_time > hi) return rr;
  SimResult sim = simulate(c, p);
  // Exactly one traversal: zero entries leave the posited exit uncaused,
  // two or more leave this single-exit ansatz short.
  if (sim.b_entry_count != 1) return rr;
  auto [exit_state, exit_time] =
      wormhole_map(c.wormhole, sim.entry_state, sim.entry_time);
  Vec2 rel = exit_state.position - c.wormhole.mouth_a_center;
  rr.feasible = true;
  rr.components = {
      (exit_time - p.exit_time) / c.char_time(),
      wrap_angle(std::atan2(rel.y, rel.x) - p.exit_angle),
      wrap_angle(std::atan2(exit_state.velocity.y, exit_state.velocity.x) -
                 p.exit_direction),
      (norm(exit_state.velocity) - p.exit_speed) / c.char_speed(),
  };
  rr.norm = std::sqrt(rr.components[0] * rr.components[0] +
                      rr.components[1] * rr.components[1] +
                      rr.components[2] * rr.components[2] +
                      rr.components[3] * rr.components[3]);
  return rr;
}

}  // namespace geon::billiard
