#include "geon/billiard_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "geon/numfmt.hpp"
#include "json.hpp"

namespace geon::billiard {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

Vec2 parse_vec2(const std::string& origin, const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad(origin, "'" + key + "' must be an [x, y] pair");
  return Vec2{j[0].get<double>(), j[1].get<double>()};
}

double parse_number(const std::string& origin, const json& j,
                    const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    bad(origin, "'" + key + "' must be a number");
  return j[key].get<double>();
}

FrameMap parse_frame_map(const std::string& origin, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return FrameMap::identity();
    bad(origin, "unknown frame_map '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("rotation") && j["rotation"].is_number())
    return FrameMap::rotation(j["rotation"].get<double>());
  if (j.is_object() && j.contains("reflection") && j["reflection"].is_number())
    return FrameMap::reflection(j["reflection"].get<double>());
  if (j.is_array() && j.size() == 2 && j[0].is_array() && j[1].is_array() &&
      j[0].size() == 2 && j[1].size() == 2) {
    FrameMap f;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (!j[r][c].is_number())
          bad(origin, "frame_map matrix entries must be numbers");
        f.m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            j[r][c].get<double>();
      }
    return f;
  }
  bad(origin,
      "frame_map must be \"identity\", {\"rotation\": a}, {\"reflection\": a},"
      " or a 2x2 matrix");
}

}  // namespace

BilliardConfig parse_billiard_config(const std::string& text,
                                     const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(origin, e.what());
  }
  if (!j.is_object()) bad(origin, "top level must be an object");
  for (const char* key : {"wormhole", "ball", "domain"})
    if (!j.contains(key) || !j[key].is_object())
      bad(origin, std::string("'") + key + "' object is required");

  BilliardConfig c;
  const json& w = j["wormhole"];
  if (!w.contains("mouth_a") || !w.contains("mouth_b"))
    bad(origin, "wormhole needs 'mouth_a' and 'mouth_b' centers");
  c.wormhole.mouth_a_center = parse_vec2(origin, w["mouth_a"], "mouth_a");
  c.wormhole.mouth_b_center = parse_vec2(origin, w["mouth_b"], "mouth_b");
  c.wormhole.mouth_radius = parse_number(origin, w, "radius");
  c.wormhole.time_shift = parse_number(origin, w, "dt");
  if (w.contains("frame_map"))
    c.wormhole.frame_map = parse_frame_map(origin, w["frame_map"]);

  const json& b = j["ball"];
  if (!b.contains("position") || !b.contains("velocity"))
    bad(origin, "ball needs 'position' and 'velocity'");
  c.ball.position = parse_vec2(origin, b["position"], "position");
  c.ball.velocity = parse_vec2(origin, b["velocity"], "velocity");
  c.ball.radius = parse_number(origin, b, "radius");
  c.ball.mass = parse_number(origin, b, "mass");
  c.ball.birth_time =
      b.contains("birth_time") ? parse_number(origin, b, "birth_time") : 0.0;

  const json& d = j["domain"];
  if (!d.contains("min") || !d.contains("max"))
    bad(origin, "domain needs 'min' and 'max' corners");
  c.domain_min = parse_vec2(origin, d["min"], "min");
  c.domain_max = parse_vec2(origin, d["max"], "max");

  c.horizon = parse_number(origin, j, "horizon");

  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (!s.is_object()) bad(origin, "'solver' must be an object");
    if (s.contains("grid")) {
      if (!s["grid"].is_number_integer())
        bad(origin, "'solver.grid' must be an integer");
      c.solver.grid = s["grid"].get<int>();
    }
    if (s.contains("basin_threshold"))
      c.solver.basin_threshold = parse_number(origin, s, "basin_threshold");
    if (s.contains("tolerance"))
      c.solver.tolerance = parse_number(origin, s, "tolerance");
    if (s.contains("dedup_radius"))
      c.solver.dedup_radius = parse_number(origin, s, "dedup_radius");
    if (s.contains("max_events")) {
      if (!s["max_events"].is_number_integer())
        bad(origin, "'solver.max_events' must be an integer");
      c.solver.max_events = s["max_events"].get<int>();
    }
  }

  c.validate();
  return c;
}

BilliardConfig load_billiard_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_billiard_config(buf.str(), path);
}

std::string solutions_csv(const std::vector<ConsistentSolution>& sols) {
  std::ostringstream out;
  out << "solution,kind,exit_time,exit_angle,exit_direction,exit_speed,"
         "residual_norm,event_count\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const ConsistentSolution& s = sols[i];
    out << i << "," << (s.trivial() ? "trivial" : "self_interacting") << ",";
    if (s.params)
      out << g12(s.params->exit_time) << "," << g12(s.params->exit_angle)
          << "," << g12(s.params->exit_direction) << ","
          << g12(s.params->exit_speed);
    else
      out << ",,,";
    out << "," << g12(s.residual_norm) << "," << s.events.size() << "\n";
  }
  return out.str();
}

std::string trajectory_csv(const ConsistentSolution& sol) {
  std::ostringstream out;
  out << "lineage,t,x,y,vx,vy\n";
  for (const TrajectorySample& s : sol.trajectory)
    out << s.lineage << "," << g12(s.t) << "," << g12(s.position.x) << ","
        << g12(s.position.y) << "," << g12(s.velocity.x) << ","
        << g12(s.velocity.y) << "\n";
  return out.str();
}

std::string event_log_text(const ConsistentSolution& sol) {
  std::ostringstream out;
  for (const Event& e : sol.events) {
    out << g12(e.time) << " " << event_kind_name(e.kind);
    for (std::size_t i = 0; i < e.balls.size(); ++i)
      out << (i ? "," : " ") << e.balls[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace geon::billiard
