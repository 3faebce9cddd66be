#include "dwa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dwa/scenario.hpp"

namespace dwa {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void set_center(Shape& shape, const Point2D& c) {
  std::visit([&](auto& s) { s.center = c; }, shape);
}

double polyline_length(const std::vector<Point2D>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += distance(pts[i - 1], pts[i]);
  }
  return total;
}

Point2D point_at_arc_length(const std::vector<Point2D>& pts, double s) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double seg = distance(pts[i - 1], pts[i]);
    if (s <= seg || i + 1 == pts.size()) {
      const double f = seg > 0.0 ? std::clamp(s / seg, 0.0, 1.0) : 0.0;
      return {pts[i - 1].x + f * (pts[i].x - pts[i - 1].x),
              pts[i - 1].y + f * (pts[i].y - pts[i - 1].y)};
    }
    s -= seg;
  }
  return pts.front();
}

// Ray o + t*d with |d| = 1.
double ray_circle(const Point2D& o, const Point2D& d, const Circle& c) {
  const double fx = o.x - c.center.x;
  const double fy = o.y - c.center.y;
  const double cc = fx * fx + fy * fy - c.radius * c.radius;
  if (cc <= 0.0) {
    return 0.0;
  }
  const double b = fx * d.x + fy * d.y;
  const double disc = b * b - cc;
  if (disc < 0.0) {
    return kInf;
  }
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : kInf;
}

double ray_rect(const Point2D& o, const Point2D& d, const Rect& r) {
  const double lo[2] = {r.center.x - r.width / 2, r.center.y - r.height / 2};
  const double hi[2] = {r.center.x + r.width / 2, r.center.y + r.height / 2};
  const double org[2] = {o.x, o.y};
  const double dir[2] = {d.x, d.y};
  if (org[0] >= lo[0] && org[0] <= hi[0] && org[1] >= lo[1] && org[1] <= hi[1]) {
    return 0.0;
  }
  double t_enter = 0.0;
  double t_exit = kInf;
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (org[axis] < lo[axis] || org[axis] > hi[axis]) {
        return kInf;
      }
      continue;
    }
    double t1 = (lo[axis] - org[axis]) / dir[axis];
    double t2 = (hi[axis] - org[axis]) / dir[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
  }
  return t_enter <= t_exit ? t_enter : kInf;
}

double ray_bounds_exit(const Point2D& o, const Point2D& d, const Bounds& b) {
  if (!b.contains(o)) {
    return 0.0;
  }
  double t = kInf;
  if (d.x > 0.0) t = std::min(t, (b.x_max - o.x) / d.x);
  if (d.x < 0.0) t = std::min(t, (b.x_min - o.x) / d.x);
  if (d.y > 0.0) t = std::min(t, (b.y_max - o.y) / d.y);
  if (d.y < 0.0) t = std::min(t, (b.y_min - o.y) / d.y);
  return t;
}

double surface_distance(const Shape& shape, const Point2D& p) {
  return std::visit(Overloaded{
                        [&](const Circle& c) { return distance(p, c.center) - c.radius; },
                        [&](const Rect& r) {
                          const double dx = std::max(std::abs(p.x - r.center.x) - r.width / 2, 0.0);
                          const double dy =
                              std::max(std::abs(p.y - r.center.y) - r.height / 2, 0.0);
                          return std::hypot(dx, dy);
                        },
                    },
                    shape);
}

}  // namespace

Point2D Obstacle::center() const {
  return std::visit([](const auto& s) { return s.center; }, shape);
}

void Obstacle::validate() const {
  std::visit(Overloaded{
                 [](const Circle& c) {
                   if (!(c.radius > 0.0)) throw std::invalid_argument("radius must be positive");
                 },
                 [](const Rect& r) {
                   if (!(r.width > 0.0 && r.height > 0.0)) {
                     throw std::invalid_argument("width and height must be positive");
                   }
                 },
             },
             shape);
  if (const auto* wp = std::get_if<Waypoints>(&motion)) {
    if (wp->points.size() < 2) throw std::invalid_argument("waypoints need at least two points");
    if (!(wp->speed >= 0.0)) throw std::invalid_argument("waypoint speed must be non-negative");
  }
}

void LidarModel::validate() const {
  if (!(fov > 0.0 && fov <= 2.0 * std::numbers::pi + 1e-12)) {
    throw std::invalid_argument("lidar fov must lie in (0, 2pi]");
  }
  if (beam_count < 1) throw std::invalid_argument("lidar beam_count must be >= 1");
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar max_range must be positive");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("lidar noise_std must be >= 0");
}

std::vector<double> LidarModel::beam_angles() const {
  std::vector<double> angles(static_cast<std::size_t>(beam_count));
  const bool full_circle = fov >= 2.0 * std::numbers::pi - 1e-12;
  if (full_circle) {
    const double step = 2.0 * std::numbers::pi / beam_count;
    for (int i = 0; i < beam_count; ++i) {
      angles[i] = normalize_angle((i - beam_count / 2) * step);
    }
  } else if (beam_count == 1) {
    angles[0] = 0.0;
  } else {
    for (int i = 0; i < beam_count; ++i) {
      angles[i] = -fov / 2 + fov * i / (beam_count - 1);
    }
  }
  return angles;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Running: return "Running";
    case RunStatus::GoalReached: return "GoalReached";
    case RunStatus::Collided: return "Collided";
    case RunStatus::Timeout: return "Timeout";
  }
  return "Running";
}

RunStatus parse_status(std::string_view name) {
  for (auto s : {RunStatus::Running, RunStatus::GoalReached, RunStatus::Collided,
                 RunStatus::Timeout}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown run status: " + std::string(name));
}

World advance_obstacles(World world, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("advance_obstacles: dt must be positive");
  }
  for (auto& obstacle : world.obstacles) {
    std::visit(Overloaded{
                   [](StaticMotion&) {},
                   [&](ConstantVelocity& cv) {
                     const Point2D c = obstacle.center();
                     set_center(obstacle.shape, {c.x + cv.vx * dt, c.y + cv.vy * dt});
                   },
                   [&](Waypoints& wp) {
                     const double length = polyline_length(wp.points);
                     double s = wp.progress + wp.direction * wp.speed * dt;
                     if (length <= 0.0) {
                       s = 0.0;
                     } else if (wp.ping_pong) {
                       // Reflect off either end as many times as needed.
                       while (s > length || s < 0.0) {
                         if (s > length) {
                           s = 2.0 * length - s;
                           wp.direction = -1;
                         } else {
                           s = -s;
                           wp.direction = 1;
                         }
                       }
                     } else {
                       s = std::clamp(s, 0.0, length);
                     }
                     wp.progress = s;
                     set_center(obstacle.shape, point_at_arc_length(wp.points, s));
                   },
               },
               obstacle.motion);
  }
  world.time += dt;
  return world;
}

double ray_distance(const World& world, const Point2D& origin, double bearing, double max_range) {
  const Point2D dir{std::cos(bearing), std::sin(bearing)};
  double best = ray_bounds_exit(origin, dir, world.bounds);
  for (const auto& obstacle : world.obstacles) {
    const double t = std::visit(Overloaded{
                                    [&](const Circle& c) { return ray_circle(origin, dir, c); },
                                    [&](const Rect& r) { return ray_rect(origin, dir, r); },
                                },
                                obstacle.shape);
    best = std::min(best, t);
  }
  return std::min(best, max_range);
}

LaserScan cast_scan(const World& world, const Pose2D& sensor_pose, const LidarModel& lidar,
                    std::uint64_t rng_seed) {
  LaserScan scan;
  scan.angles = lidar.beam_angles();
  scan.max_range = lidar.max_range;
  scan.ranges.reserve(scan.angles.size());
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> noise(0.0, lidar.noise_std > 0.0 ? lidar.noise_std : 1.0);
  for (double a : scan.angles) {
    double r = ray_distance(world, sensor_pose.position(), sensor_pose.theta + a, lidar.max_range);
    if (lidar.noise_std > 0.0 && r < lidar.max_range) {
      r = std::clamp(r + noise(rng), 0.0, lidar.max_range);
    }
    scan.ranges.push_back(r);
  }
  return scan;
}

bool collides(const World& world, const Pose2D& pose, double footprint_radius) {
  const Point2D p = pose.position();
  const Bounds& b = world.bounds;
  if (p.x - footprint_radius <= b.x_min || p.x + footprint_radius >= b.x_max ||
      p.y - footprint_radius <= b.y_min || p.y + footprint_radius >= b.y_max) {
    return true;
  }
  return std::any_of(world.obstacles.begin(), world.obstacles.end(), [&](const Obstacle& o) {
    return surface_distance(o.shape, p) <= footprint_radius;
  });
}

double ground_truth_clearance(const World& world, const Point2D& p, double footprint_radius) {
  const Bounds& b = world.bounds;
  double best = std::min({p.x - b.x_min, b.x_max - p.x, p.y - b.y_min, b.y_max - p.y});
  for (const auto& o : world.obstacles) {
    best = std::min(best, surface_distance(o.shape, p));
  }
  return std::max(0.0, best - footprint_radius);
}

SimulationResult simulate(const Scenario& scenario) {
  scenario.validate();

  const double sim_dt = scenario.sim.sim_dt;
  const double footprint = scenario.robot.footprint_radius;
  const PlannerParams& params = scenario.planner;
  const long plan_every = std::max(1L, std::lround(params.control_dt / sim_dt));

  World world = scenario.initial_world();
  Pose2D pose = scenario.robot.start;
  VelocityCommand held{};
  SimulationResult result;
  result.last_grid = OccupancyGrid::covering(scenario.map.width, scenario.map.height,
                                             scenario.map.resolution);

  const OccupancyGrid blank = result.last_grid;
  PlanContext ctx;
  ctx.goal = scenario.goal.position;
  ctx.footprint_radius = scenario.planning_footprint();
  ctx.limits = scenario.robot.limits;
  ctx.params = params;

  for (long step = 0;; ++step) {
    TraceRecord rec;
    rec.t = static_cast<double>(step) * sim_dt;
    rec.pose = pose;
    rec.goal_dist = distance(pose.position(), scenario.goal.position);
    rec.min_clearance = ground_truth_clearance(world, pose.position(), footprint);
    rec.cmd = held;

    if (rec.goal_dist <= scenario.goal.tolerance) {
      rec.status = RunStatus::GoalReached;
    } else if (collides(world, pose, footprint)) {
      rec.status = RunStatus::Collided;
    } else if (step >= scenario.sim.max_steps) {
      rec.status = RunStatus::Timeout;
    }
    if (rec.status != RunStatus::Running) {
      result.trace.push_back(rec);
      break;
    }

    if (step % plan_every == 0) {
      // splitmix-style decorrelation of per-scan seeds
      const std::uint64_t scan_seed =
          scenario.sim.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(step + 1));
      const LaserScan scan = cast_scan(world, pose, scenario.lidar, scan_seed);
      result.last_grid = inflate(integrate_scan(blank, pose, scan), scenario.inflation_radius());
      ctx.grid = &result.last_grid;
      ctx.current_pose = pose;
      ctx.current_cmd = held;
      const PlanResult planned = plan_detailed(ctx);
      held = planned.command;
      rec.cmd = held;
      rec.candidates_evaluated = planned.candidates_evaluated;
    }
    result.trace.push_back(rec);

    pose = integrate_unicycle(pose, held, sim_dt);
    world = advance_obstacles(std::move(world), sim_dt);
  }
  return result;
}

std::vector<TraceRecord> run_scenario(const Scenario& scenario) {
  return simulate(scenario).trace;
}

}  // namespace dwa
