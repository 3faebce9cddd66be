#pragma once

// Shared fixtures for the unit and acceptance tests: random planning
// contexts, brute-force reference evaluators and random closed-loop worlds.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "dwa/costmap.hpp"
#include "dwa/kinematics.hpp"
#include "dwa/planner.hpp"
#include "dwa/scenario.hpp"
#include "dwa/simulator.hpp"

namespace dwa::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Euler integration with a fixed small step, used as a kinematics oracle.
inline Pose2D euler_integrate(Pose2D pose, const VelocityCommand& cmd, double duration, double dt) {
  const long steps = std::lround(duration / dt);
  double x = pose.x;
  double y = pose.y;
  double th = pose.theta;
  for (long i = 0; i < steps; ++i) {
    x += cmd.v * std::cos(th) * dt;
    y += cmd.v * std::sin(th) * dt;
    th += cmd.omega * dt;
  }
  return Pose2D(x, y, th);
}

/// Direct all-cells nearest-Occupied distance, independent of ClearanceQuery.
inline std::optional<double> brute_nearest(const OccupancyGrid& grid, const Point2D& p) {
  std::optional<double> best;
  for (int row = 0; row < grid.height_cells(); ++row) {
    for (int col = 0; col < grid.width_cells(); ++col) {
      if (grid.at({col, row}) != CellState::Occupied) continue;
      const Point2D c = grid.cell_center({col, row});
      const double dx = c.x - p.x;
      const double dy = c.y - p.y;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (!best || d < *best) best = d;
    }
  }
  return best;
}

inline double brute_trajectory_clearance(const OccupancyGrid& grid, const Trajectory& traj,
                                         double footprint, double d_max) {
  double best = d_max;
  for (const Pose2D& pose : traj.poses) {
    const auto cell = grid.world_to_cell(pose.position());
    if (!cell || grid.at(*cell) == CellState::Inflated) return 0.0;
    if (const auto d = brute_nearest(grid, pose.position())) {
      best = std::min(best, std::max(0.0, *d - footprint));
    }
  }
  return std::min(best, d_max);
}

struct OracleCandidate {
  VelocityCommand cmd;
  double g = 0.0;
};

struct OracleChoice {
  VelocityCommand cmd;
  bool emergency = false;
};

/// Exhaustive evaluation of the sampled window with its own scoring,
/// admissibility and selection code.
inline OracleChoice brute_force_plan(const PlanContext& ctx) {
  const PlannerParams& p = ctx.params;
  const RobotLimits& lim = ctx.limits;
  const auto samples =
      sample_window(dynamic_window(ctx.current_cmd, lim, p.control_dt), p.n_v, p.n_omega);

  std::vector<OracleCandidate> admissible;
  for (const auto& cmd : samples) {
    const Trajectory traj = rollout(ctx.current_pose, cmd, p.horizon, p.rollout_dt);
    const double dist =
        brute_trajectory_clearance(*ctx.grid, traj, ctx.footprint_radius, p.d_max_clearance);
    const bool ok = cmd.v <= std::sqrt(2.0 * dist * lim.accel_v) &&
                    std::abs(cmd.omega) <= std::sqrt(2.0 * dist * lim.accel_omega);
    if (!ok) continue;

    const Pose2D& end = traj.poses.back();
    double err = 0.0;
    const double dx = ctx.goal.x - end.x;
    const double dy = ctx.goal.y - end.y;
    if (std::hypot(dx, dy) > 1e-9) {
      err = std::abs(normalize_angle(std::atan2(dy, dx) - end.theta));
    }
    const double a = 1.0 - err / std::numbers::pi;
    const double b = std::min(dist, p.d_max_clearance) / p.d_max_clearance;
    const double c = cmd.v / lim.v_max;
    admissible.push_back({cmd, p.alpha * a + p.beta * b + p.gamma * c});
  }

  if (admissible.empty()) {
    OracleChoice stop{{}, true};
    const double dw = lim.accel_omega * p.control_dt;
    stop.cmd.v = std::max(0.0, ctx.current_cmd.v - lim.accel_v * p.control_dt);
    const double w = ctx.current_cmd.omega;
    stop.cmd.omega = w > dw ? w - dw : (w < -dw ? w + dw : 0.0);
    return stop;
  }

  OracleCandidate best = admissible.front();
  for (const auto& c : admissible) {
    bool better = false;
    if (std::abs(c.g - best.g) > 1e-12 * std::max(c.g, best.g)) {
      better = c.g > best.g;
    } else if (c.cmd.v != best.cmd.v) {
      better = c.cmd.v > best.cmd.v;
    } else if (std::abs(c.cmd.omega) != std::abs(best.cmd.omega)) {
      better = std::abs(c.cmd.omega) < std::abs(best.cmd.omega);
    } else {
      better = c.cmd.omega < best.cmd.omega;
    }
    if (better) best = c;
  }
  return {best.cmd, false};
}

/// A planning context that owns its grid.
struct RandomContext {
  std::shared_ptr<const OccupancyGrid> grid;
  PlanContext ctx;
};

/**
 * Draws a context in a 6 m x 6 m room. The costmap is either empty, built
 * from a lidar scan of random circles and boxes (the closed-loop case), or
 * scattered Occupied cells with inflation.
 */
inline RandomContext random_context(std::mt19937_64& rng) {
  constexpr double kSize = 6.0;
  const double res = uniform_int(rng, 0, 1) == 0 ? 0.05 : 0.1;
  OccupancyGrid grid = OccupancyGrid::covering(kSize, kSize, res);

  const Pose2D pose(uniform(rng, 1.5, 4.5), uniform(rng, 1.5, 4.5),
                    uniform(rng, -std::numbers::pi, std::numbers::pi));
  const double footprint = uniform(rng, 0.1, 0.35);

  const int kind = uniform_int(rng, 0, 5);
  if (kind == 0) {
    grid = OccupancyGrid(grid.width_cells(), grid.height_cells(), res, {}, CellState::Free);
  } else if (kind <= 3) {
    World world;
    world.bounds = {0.0, 0.0, kSize, kSize};
    const int n = uniform_int(rng, 1, 6);
    while (static_cast<int>(world.obstacles.size()) < n) {
      const Point2D c{uniform(rng, 0.5, kSize - 0.5), uniform(rng, 0.5, kSize - 0.5)};
      Obstacle o;
      if (uniform_int(rng, 0, 1) == 0) {
        o.shape = Circle{c, uniform(rng, 0.1, 0.6)};
      } else {
        o.shape = Rect{c, uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0)};
      }
      o.motion = StaticMotion{};
      if (collides(World{world.bounds, {o}, 0.0}, pose, 0.05)) continue;
      world.obstacles.push_back(o);
    }
    LidarModel lidar;
    lidar.beam_count = uniform_int(rng, 90, 360);
    grid = integrate_scan(grid, pose, cast_scan(world, pose, lidar, rng()));
    if (uniform_int(rng, 0, 1) == 0) grid = inflate(grid, footprint);
  } else {
    const int n = uniform_int(rng, 1, 40);
    for (int i = 0; i < n; ++i) {
      grid.set({uniform_int(rng, 0, grid.width_cells() - 1),
                uniform_int(rng, 0, grid.height_cells() - 1)},
               CellState::Occupied);
    }
    if (uniform_int(rng, 0, 1) == 0) grid = inflate(grid, uniform(rng, 0.0, 0.3));
  }

  RandomContext rc;
  rc.grid = std::make_shared<const OccupancyGrid>(std::move(grid));
  PlanContext& ctx = rc.ctx;
  ctx.grid = rc.grid.get();
  ctx.current_pose = pose;
  ctx.footprint_radius = footprint;
  ctx.limits.v_max = uniform(rng, 0.3, 1.0);
  ctx.limits.omega_max = uniform(rng, 0.5, 2.5);
  ctx.limits.accel_v = uniform(rng, 0.2, 1.5);
  ctx.limits.accel_omega = uniform(rng, 0.5, 3.0);
  ctx.current_cmd = {uniform(rng, 0.0, ctx.limits.v_max),
                     uniform(rng, -ctx.limits.omega_max, ctx.limits.omega_max)};
  if (uniform_int(rng, 0, 4) == 0) ctx.current_cmd = {};

  // Some goals straight ahead so that mirror-image candidates tie exactly.
  if (uniform_int(rng, 0, 3) == 0) {
    const double r = uniform(rng, 0.5, 3.0);
    ctx.goal = {pose.x + r * std::cos(pose.theta), pose.y + r * std::sin(pose.theta)};
  } else {
    ctx.goal = {uniform(rng, 0.0, kSize), uniform(rng, 0.0, kSize)};
  }

  PlannerParams& p = ctx.params;
  p.alpha = uniform(rng, 0.0, 1.0);
  p.beta = uniform(rng, 0.0, 1.0);
  p.gamma = uniform(rng, 0.0, 1.0);
  if (uniform_int(rng, 0, 4) == 0) p.beta = 0.0;
  p.control_dt = uniform(rng, 0.1, 0.3);
  p.horizon = uniform(rng, 0.5, 2.0);
  p.rollout_dt = uniform(rng, 0.05, 0.2);
  p.n_v = uniform_int(rng, 2, 9);
  p.n_omega = uniform_int(rng, 2, 15);
  p.d_max_clearance = uniform(rng, 0.5, 10.0);
  return rc;
}

/**
 * A random closed-loop world: start on the left, goal on the right, static
 * obstacles scattered over the room and scripted movers no faster than half
 * the robot's top speed. Movers travel along lanes that keep a clear gap to
 * the start-goal segment, so they can pass a robot that has stopped.
 */
inline Scenario random_safety_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.map.width = 10.0;
  s.map.height = 8.0;
  const double y0 = uniform(rng, 2.5, 5.5);
  s.goal.position = {9.0, uniform(rng, 2.5, 5.5)};
  s.robot.start = Pose2D(1.0, y0, std::atan2(s.goal.position.y - y0, 8.0) + uniform(rng, -0.3, 0.3));
  s.planner.alpha = uniform(rng, 0.7, 1.0);
  s.planner.beta = uniform(rng, 0.05, 0.2);
  s.planner.gamma = uniform(rng, 0.1, 0.5);
  s.sim.max_steps = 800;
  s.sim.seed = seed;

  const World empty{{0.0, 0.0, s.map.width, s.map.height}, {}, 0.0};
  const double v_max = s.robot.limits.v_max;
  const Point2D a = s.robot.start.position();
  const Point2D b = s.goal.position;
  const auto offset_from_route = [&](const Point2D& p) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return distance(p, {a.x + t * dx, a.y + t * dy});
  };

  const int n_static = uniform_int(rng, 1, 3);
  while (static_cast<int>(s.obstacles.size()) < n_static) {
    const Point2D c{uniform(rng, 2.5, 7.5), uniform(rng, 1.0, 7.0)};
    Obstacle o;
    if (uniform_int(rng, 0, 1) == 0) {
      o.shape = Circle{c, uniform(rng, 0.2, 0.5)};
    } else {
      o.shape = Rect{c, uniform(rng, 0.3, 1.0), uniform(rng, 0.3, 1.0)};
    }
    o.motion = StaticMotion{};
    World probe = empty;
    probe.obstacles = {o};
    if (ground_truth_clearance(probe, a, s.robot.footprint_radius) < 0.5) continue;
    if (ground_truth_clearance(probe, b, s.robot.footprint_radius) < 0.5) continue;
    s.obstacles.push_back(o);
  }

  const int n_dynamic = uniform_int(rng, 1, 2);
  for (int k = 0; k < n_dynamic;) {
    const double radius = uniform(rng, 0.2, 0.35);
    const double speed = uniform(rng, 0.1, 0.5 * v_max);
    const double gap = s.robot.footprint_radius + radius + 0.2;
    // Lane endpoints inside the room, roughly parallel to the route.
    const double side = uniform_int(rng, 0, 1) == 0 ? -1.0 : 1.0;
    const double lane_offset = uniform(rng, gap + 0.5, gap + 1.5);
    const double x0 = uniform(rng, 2.0, 4.0);
    const double x1 = uniform(rng, 6.0, 8.5);
    const auto lane_y = [&](double x) {
      const double t = (x - a.x) / (b.x - a.x);
      return a.y + t * (b.y - a.y) + side * lane_offset;
    };
    const Point2D p0{x0, lane_y(x0)};
    const Point2D p1{x1, lane_y(x1)};
    if (!empty.bounds.contains(p0) || !empty.bounds.contains(p1)) continue;
    if (std::min({p0.y, p1.y}) - radius <= 0.1 || std::max({p0.y, p1.y}) + radius >= 7.9) continue;
    if (offset_from_route(p0) < gap || offset_from_route(p1) < gap) continue;

    Obstacle o;
    o.shape = Circle{p1, radius};
    if (uniform_int(rng, 0, 1) == 0) {
      const double len = distance(p0, p1);
      o.motion = ConstantVelocity{speed * (p0.x - p1.x) / len, speed * (p0.y - p1.y) / len};
    } else {
      o.motion = Waypoints{{p1, p0}, speed, true};
    }
    s.obstacles.push_back(o);
    ++k;
  }
  return s;
}

}  // namespace dwa::test
