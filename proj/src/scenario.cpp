#include "dwa/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dwa {

using nlohmann::json;

namespace {

// ---- reading helpers -------------------------------------------------------

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json* child(const json& obj, const std::string& key, const std::string& path, bool required) {
  if (!obj.is_object()) {
    throw ValidationError(path, "expected an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) throw ValidationError(join(path, key), "required field is missing");
    return nullptr;
  }
  return &*it;
}

double read_number(const json& obj, const std::string& key, const std::string& path,
                   double fallback, bool required = false) {
  const json* v = child(obj, key, path, required);
  if (v == nullptr) return fallback;
  if (!v->is_number()) throw ValidationError(join(path, key), "expected a number");
  return v->get<double>();
}

int read_int(const json& obj, const std::string& key, const std::string& path, int fallback) {
  const json* v = child(obj, key, path, false);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) throw ValidationError(join(path, key), "expected an integer");
  return v->get<int>();
}

bool read_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  const json* v = child(obj, key, path, false);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) throw ValidationError(join(path, key), "expected a boolean");
  return v->get<bool>();
}

// Points are [x, y] arrays or {"x": .., "y": ..} objects.
Point2D read_point(const json& v, const std::string& path) {
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object()) {
    return {read_number(v, "x", path, 0.0, true), read_number(v, "y", path, 0.0, true)};
  }
  throw ValidationError(path, "expected [x, y] or {\"x\", \"y\"}");
}

Obstacle read_obstacle(const json& v, const std::string& path) {
  if (!v.is_object()) throw ValidationError(path, "expected an object");
  const json* shape = child(v, "shape", path, true);
  if (!shape->is_string()) throw ValidationError(path + ".shape", "expected a string");

  Motion motion = StaticMotion{};
  if (const json* m = child(v, "motion", path, false)) {
    const std::string mpath = path + ".motion";
    const json* type = child(*m, "type", mpath, true);
    const std::string t = type->is_string() ? type->get<std::string>() : "";
    if (t == "static") {
      motion = StaticMotion{};
    } else if (t == "constant_velocity") {
      motion = ConstantVelocity{read_number(*m, "vx", mpath, 0.0), read_number(*m, "vy", mpath, 0.0)};
    } else if (t == "waypoints") {
      Waypoints wp;
      const json* pts = child(*m, "points", mpath, true);
      if (!pts->is_array()) throw ValidationError(mpath + ".points", "expected an array");
      for (std::size_t i = 0; i < pts->size(); ++i) {
        wp.points.push_back(read_point((*pts)[i], mpath + ".points[" + std::to_string(i) + "]"));
      }
      wp.speed = read_number(*m, "speed", mpath, 0.0, true);
      wp.ping_pong = read_bool(*m, "ping_pong", mpath, true);
      if (wp.points.size() < 2) throw ValidationError(mpath + ".points", "need at least two points");
      motion = std::move(wp);
    } else {
      throw ValidationError(mpath + ".type", "expected static, constant_velocity or waypoints");
    }
  }

  Point2D center;
  if (const auto* wp = std::get_if<Waypoints>(&motion)) {
    center = wp->points.front();
  } else {
    center = read_point(*child(v, "center", path, true), path + ".center");
  }

  const std::string kind = shape->get<std::string>();
  Obstacle o;
  o.motion = std::move(motion);
  if (kind == "circle") {
    o.shape = Circle{center, read_number(v, "radius", path, 0.0, true)};
  } else if (kind == "rect") {
    o.shape = Rect{center, read_number(v, "width", path, 0.0, true),
                   read_number(v, "height", path, 0.0, true)};
  } else {
    throw ValidationError(path + ".shape", "expected circle or rect");
  }
  return o;
}

// ---- writing helpers -------------------------------------------------------

json point_json(const Point2D& p) { return json::array({p.x, p.y}); }

json obstacle_json(const Obstacle& o) {
  json j;
  if (const auto* c = std::get_if<Circle>(&o.shape)) {
    j["shape"] = "circle";
    j["radius"] = c->radius;
  } else {
    const auto& r = std::get<Rect>(o.shape);
    j["shape"] = "rect";
    j["width"] = r.width;
    j["height"] = r.height;
  }
  j["center"] = point_json(o.center());
  if (const auto* cv = std::get_if<ConstantVelocity>(&o.motion)) {
    j["motion"] = {{"type", "constant_velocity"}, {"vx", cv->vx}, {"vy", cv->vy}};
  } else if (const auto* wp = std::get_if<Waypoints>(&o.motion)) {
    json pts = json::array();
    for (const auto& p : wp->points) pts.push_back(point_json(p));
    j["motion"] = {{"type", "waypoints"}, {"points", pts}, {"speed", wp->speed},
                   {"ping_pong", wp->ping_pong}};
  } else {
    j["motion"] = {{"type", "static"}};
  }
  return j;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

std::string format_g6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace

// ---- Scenario --------------------------------------------------------------

void Scenario::validate() const {
  require(map.width > 0.0, "map.width", "must be positive");
  require(map.height > 0.0, "map.height", "must be positive");
  require(map.resolution > 0.0, "map.resolution", "must be positive");
  require(!map.inflation_radius || *map.inflation_radius >= 0.0, "map.inflation_radius",
          "must be non-negative");

  const Bounds bounds{0.0, 0.0, map.width, map.height};
  require(bounds.contains(robot.start.position()), "robot.start", "must lie inside the map");
  require(robot.footprint_radius > 0.0, "robot.footprint_radius", "must be positive");
  require(!robot.safety_margin || *robot.safety_margin >= 0.0, "robot.safety_margin",
          "must be non-negative");
  require(robot.limits.v_max > 0.0, "robot.v_max", "must be positive");
  require(robot.limits.omega_max > 0.0, "robot.omega_max", "must be positive");
  require(robot.limits.accel_v > 0.0, "robot.accel_v", "must be positive");
  require(robot.limits.accel_omega > 0.0, "robot.accel_omega", "must be positive");

  try {
    lidar.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("lidar", e.what());
  }

  require(bounds.contains(goal.position), "goal", "must lie inside the map");
  require(goal.tolerance > 0.0, "goal.tolerance", "must be positive");

  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string path = "obstacles[" + std::to_string(i) + "]";
    try {
      obstacles[i].validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(path, e.what());
    }
    require(bounds.contains(obstacles[i].center()), path + ".center", "must lie inside the map");
    if (const auto* wp = std::get_if<Waypoints>(&obstacles[i].motion)) {
      for (std::size_t k = 0; k < wp->points.size(); ++k) {
        require(bounds.contains(wp->points[k]),
                path + ".motion.points[" + std::to_string(k) + "]", "must lie inside the map");
      }
    }
  }

  const PlannerParams& p = planner;
  require(p.alpha >= 0.0, "planner.alpha", "must be non-negative");
  require(p.beta >= 0.0, "planner.beta", "must be non-negative");
  require(p.gamma >= 0.0, "planner.gamma", "must be non-negative");
  require(p.alpha + p.beta + p.gamma > 0.0, "planner", "weights must not all be zero");
  require(p.control_dt > 0.0, "planner.control_dt", "must be positive");
  require(p.horizon > 0.0, "planner.horizon", "must be positive");
  require(p.rollout_dt > 0.0 && p.rollout_dt <= p.horizon, "planner.rollout_dt",
          "must lie in (0, horizon]");
  require(p.n_v >= 2, "planner.n_v", "must be at least 2");
  require(p.n_omega >= 2, "planner.n_omega", "must be at least 2");
  require(p.d_max_clearance > 0.0, "planner.d_max_clearance", "must be positive");

  require(sim.sim_dt > 0.0, "sim.sim_dt", "must be positive");
  require(sim.max_steps >= 1, "sim.max_steps", "must be at least 1");
}

World Scenario::initial_world() const {
  World w;
  w.bounds = {0.0, 0.0, map.width, map.height};
  w.obstacles = obstacles;
  return w;
}

Scenario load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  if (!doc.is_object()) throw ValidationError("(root)", "expected a JSON object");

  Scenario s;
  const json& map = *child(doc, "map", "", true);
  s.map.width = read_number(map, "width", "map", s.map.width);
  s.map.height = read_number(map, "height", "map", s.map.height);
  s.map.resolution = read_number(map, "resolution", "map", s.map.resolution);
  if (child(map, "inflation_radius", "map", false)) {
    s.map.inflation_radius = read_number(map, "inflation_radius", "map", 0.0);
  }

  const json& robot = *child(doc, "robot", "", true);
  const json& start = *child(robot, "start", "robot", true);
  s.robot.start = Pose2D(read_number(start, "x", "robot.start", 0.0, true),
                         read_number(start, "y", "robot.start", 0.0, true),
                         read_number(start, "theta", "robot.start", 0.0));
  s.robot.footprint_radius = read_number(robot, "footprint_radius", "robot", s.robot.footprint_radius);
  if (child(robot, "safety_margin", "robot", false)) {
    s.robot.safety_margin = read_number(robot, "safety_margin", "robot", 0.0);
  }
  RobotLimits& lim = s.robot.limits;
  lim.v_max = read_number(robot, "v_max", "robot", lim.v_max);
  lim.omega_max = read_number(robot, "omega_max", "robot", lim.omega_max);
  lim.accel_v = read_number(robot, "accel_v", "robot", lim.accel_v);
  lim.accel_omega = read_number(robot, "accel_omega", "robot", lim.accel_omega);

  if (const json* lidar = child(doc, "lidar", "", false)) {
    s.lidar.fov = read_number(*lidar, "fov", "lidar", s.lidar.fov);
    s.lidar.beam_count = read_int(*lidar, "beam_count", "lidar", s.lidar.beam_count);
    s.lidar.max_range = read_number(*lidar, "max_range", "lidar", s.lidar.max_range);
    s.lidar.noise_std = read_number(*lidar, "noise_std", "lidar", s.lidar.noise_std);
  }

  const json& goal = *child(doc, "goal", "", true);
  s.goal.position = {read_number(goal, "x", "goal", 0.0, true),
                     read_number(goal, "y", "goal", 0.0, true)};
  s.goal.tolerance = read_number(goal, "tolerance", "goal", s.goal.tolerance);

  if (const json* obstacles = child(doc, "obstacles", "", false)) {
    if (!obstacles->is_array()) throw ValidationError("obstacles", "expected an array");
    for (std::size_t i = 0; i < obstacles->size(); ++i) {
      s.obstacles.push_back(read_obstacle((*obstacles)[i], "obstacles[" + std::to_string(i) + "]"));
    }
  }

  if (const json* planner = child(doc, "planner", "", false)) {
    PlannerParams& p = s.planner;
    p.alpha = read_number(*planner, "alpha", "planner", p.alpha);
    p.beta = read_number(*planner, "beta", "planner", p.beta);
    p.gamma = read_number(*planner, "gamma", "planner", p.gamma);
    p.control_dt = read_number(*planner, "control_dt", "planner", p.control_dt);
    p.horizon = read_number(*planner, "horizon", "planner", p.horizon);
    p.rollout_dt = read_number(*planner, "rollout_dt", "planner", p.rollout_dt);
    p.n_v = read_int(*planner, "n_v", "planner", p.n_v);
    p.n_omega = read_int(*planner, "n_omega", "planner", p.n_omega);
    p.d_max_clearance = read_number(*planner, "d_max_clearance", "planner", p.d_max_clearance);
  }

  if (const json* sim = child(doc, "sim", "", false)) {
    s.sim.sim_dt = read_number(*sim, "sim_dt", "sim", s.sim.sim_dt);
    s.sim.max_steps = read_int(*sim, "max_steps", "sim", s.sim.max_steps);
    if (const json* seed = child(*sim, "seed", "sim", false)) {
      if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
        throw ValidationError("sim.seed", "expected a non-negative integer");
      }
      s.sim.seed = seed->get<std::uint64_t>();
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(read_file(path)); }

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["map"] = {{"width", s.map.width}, {"height", s.map.height}, {"resolution", s.map.resolution}};
  if (s.map.inflation_radius) doc["map"]["inflation_radius"] = *s.map.inflation_radius;
  doc["robot"] = {
      {"start", {{"x", s.robot.start.x}, {"y", s.robot.start.y}, {"theta", s.robot.start.theta}}},
      {"footprint_radius", s.robot.footprint_radius},
      {"v_max", s.robot.limits.v_max},
      {"omega_max", s.robot.limits.omega_max},
      {"accel_v", s.robot.limits.accel_v},
      {"accel_omega", s.robot.limits.accel_omega},
  };
  if (s.robot.safety_margin) doc["robot"]["safety_margin"] = *s.robot.safety_margin;
  doc["lidar"] = {{"fov", s.lidar.fov},
                  {"beam_count", s.lidar.beam_count},
                  {"max_range", s.lidar.max_range},
                  {"noise_std", s.lidar.noise_std}};
  doc["goal"] = {{"x", s.goal.position.x}, {"y", s.goal.position.y}, {"tolerance", s.goal.tolerance}};
  doc["obstacles"] = json::array();
  for (const auto& o : s.obstacles) doc["obstacles"].push_back(obstacle_json(o));
  const PlannerParams& p = s.planner;
  doc["planner"] = {{"alpha", p.alpha},           {"beta", p.beta},
                    {"gamma", p.gamma},           {"control_dt", p.control_dt},
                    {"horizon", p.horizon},       {"rollout_dt", p.rollout_dt},
                    {"n_v", p.n_v},               {"n_omega", p.n_omega},
                    {"d_max_clearance", p.d_max_clearance}};
  doc["sim"] = {{"sim_dt", s.sim.sim_dt}, {"max_steps", s.sim.max_steps}, {"seed", s.sim.seed}};
  return doc.dump(2) + "\n";
}

// ---- built-in cases --------------------------------------------------------

Scenario builtin_scenario(int case_id) {
  constexpr double kObstacleSpeed = 0.3;

  Scenario s;
  s.map.width = 10.0;
  s.map.height = 8.0;
  s.robot.start = Pose2D(1.0, 4.0, 0.0);
  s.robot.footprint_radius = 0.25;
  s.robot.limits.v_max = 0.6;
  s.goal.tolerance = 0.2;
  s.sim.max_steps = 1200;

  switch (case_id) {
    case 1:
      // Static slalom: circle above, square below, circle above.
      s.planner.alpha = 0.85;
      s.planner.beta = 0.15;
      s.planner.gamma = 0.1;
      s.goal.position = {9.0, 4.0};
      s.obstacles = {
          {Circle{{3.5, 4.75}, 0.4}, StaticMotion{}},
          {Rect{{5.5, 3.25}, 0.8, 0.8}, StaticMotion{}},
          {Circle{{7.5, 4.7}, 0.35}, StaticMotion{}},
      };
      break;
    case 2:
      // One obstacle driving against the robot in the adjacent lane.
      s.planner.alpha = 1.0;
      s.planner.beta = 0.1;
      s.planner.gamma = 0.5;
      s.goal.position = {9.0, 4.0};
      s.obstacles = {
          {Circle{{8.0, 4.65}, 0.3}, ConstantVelocity{-kObstacleSpeed, 0.0}},
      };
      break;
    case 3:
      // Two static obstacles early on, then an oncoming one that stops at x = 4.
      s.planner.alpha = 1.0;
      s.planner.beta = 0.1;
      s.planner.gamma = 0.1;
      s.goal.position = {8.5, 4.0};
      s.obstacles = {
          {Circle{{3.0, 4.75}, 0.4}, StaticMotion{}},
          {Rect{{5.0, 3.25}, 0.8, 0.8}, StaticMotion{}},
          {Circle{{8.5, 4.65}, 0.3},
           Waypoints{{{8.5, 4.65}, {4.0, 4.65}}, kObstacleSpeed, false}},
      };
      break;
    default:
      throw std::invalid_argument("builtin_scenario: case id must be 1, 2 or 3");
  }
  s.validate();
  return s;
}

// ---- traces ----------------------------------------------------------------

std::string write_trace(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) {
    throw std::invalid_argument("write_trace: empty trace");
  }
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : trace) {
    for (double v : {r.t, r.pose.x, r.pose.y, r.pose.theta, r.cmd.v, r.cmd.omega, r.min_clearance,
                     r.goal_dist}) {
      out += format_g6(v);
      out += ',';
    }
    out += to_string(r.status);
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> parse_trace(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::invalid_argument("parse_trace: missing or unexpected header");
  }
  std::vector<TraceRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 9) {
      throw std::invalid_argument("parse_trace: line " + std::to_string(line_no) +
                                  " does not have 9 fields");
    }
    double values[8];
    for (int i = 0; i < 8; ++i) {
      const auto& f = fields[i];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw std::invalid_argument("parse_trace: bad number on line " + std::to_string(line_no));
      }
    }
    TraceRecord r;
    r.t = values[0];
    r.pose = Pose2D(values[1], values[2], values[3]);
    r.cmd = {values[4], values[5]};
    r.min_clearance = values[6];
    r.goal_dist = values[7];
    r.status = parse_status(fields[8]);
    trace.push_back(r);
  }
  return trace;
}

RunSummary summarize(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) {
    throw std::invalid_argument("summarize: empty trace");
  }
  RunSummary s;
  s.status = trace.back().status;
  s.time_to_goal = trace.back().t;
  s.min_clearance = trace.front().min_clearance;
  double v_sum = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    s.max_v = std::max(s.max_v, r.cmd.v);
    s.min_clearance = std::min(s.min_clearance, r.min_clearance);
    v_sum += r.cmd.v;
    if (i > 0) {
      s.path_length += distance(trace[i - 1].pose.position(), r.pose.position());
    }
  }
  s.mean_v = v_sum / static_cast<double>(trace.size());
  return s;
}

// ---- files -----------------------------------------------------------------

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dwa
