#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "dwa/costmap.hpp"
#include "dwa/kinematics.hpp"
#include "dwa/planner.hpp"

namespace dwa {

struct Circle {
  Point2D center;
  double radius = 0.0;
};

/// Axis-aligned rectangle.
struct Rect {
  Point2D center;
  double width = 0.0;
  double height = 0.0;
};

using Shape = std::variant<Circle, Rect>;

struct StaticMotion {};

struct ConstantVelocity {
  double vx = 0.0;
  double vy = 0.0;
};

/// Moves along a polyline at constant speed. With ping_pong the obstacle
/// bounces between the end points forever; otherwise it parks at the last one.
struct Waypoints {
  std::vector<Point2D> points;
  double speed = 0.0;
  bool ping_pong = true;
  double progress = 0.0;  // arc length from points.front()
  int direction = 1;
};

using Motion = std::variant<StaticMotion, ConstantVelocity, Waypoints>;

struct Obstacle {
  Shape shape;
  Motion motion;

  Point2D center() const;
  bool is_static() const { return std::holds_alternative<StaticMotion>(motion); }
  /// Throws std::invalid_argument on non-positive extents or a short waypoint list.
  void validate() const;
};

struct LidarModel {
  double fov = 6.283185307179586;
  int beam_count = 360;
  double max_range = 8.0;
  double noise_std = 0.0;

  void validate() const;
  /// Beam directions in the sensor frame. A full circle uses spacing 2pi/n
  /// with a beam straight ahead; a partial fan spans [-fov/2, fov/2].
  std::vector<double> beam_angles() const;
  friend bool operator==(const LidarModel&, const LidarModel&) = default;
};

struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool contains(const Point2D& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

struct World {
  Bounds bounds;
  std::vector<Obstacle> obstacles;
  double time = 0.0;
};

enum class RunStatus { Running, GoalReached, Collided, Timeout };

std::string_view to_string(RunStatus status);
/// Throws std::invalid_argument for unknown names.
RunStatus parse_status(std::string_view name);

struct TraceRecord {
  double t = 0.0;
  Pose2D pose;
  VelocityCommand cmd;
  double min_clearance = 0.0;
  double goal_dist = 0.0;
  std::size_t candidates_evaluated = 0;
  RunStatus status = RunStatus::Running;
};

World advance_obstacles(World world, double dt);

/// Distance along a ray to the nearest obstacle surface or world wall,
/// capped at max_range. Zero when the origin is inside an obstacle or
/// outside the bounds.
double ray_distance(const World& world, const Point2D& origin, double bearing, double max_range);

LaserScan cast_scan(const World& world, const Pose2D& sensor_pose, const LidarModel& lidar,
                    std::uint64_t rng_seed);

/// Footprint disk touches or overlaps an obstacle, or reaches a wall.
bool collides(const World& world, const Pose2D& pose, double footprint_radius);

/// Gap between the footprint disk and the nearest obstacle or wall, >= 0.
double ground_truth_clearance(const World& world, const Point2D& p, double footprint_radius);

struct Scenario;

struct SimulationResult {
  std::vector<TraceRecord> trace;
  /// Costmap used by the most recent planning cycle.
  OccupancyGrid last_grid{1, 1, kDefaultResolution};
};

SimulationResult simulate(const Scenario& scenario);
std::vector<TraceRecord> run_scenario(const Scenario& scenario);

}  // namespace dwa
