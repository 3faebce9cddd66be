#pragma once

#include <vector>

namespace dwa {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Robot pose in the world frame. Heading is kept in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2D position() const { return {x, y}; }

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Translational / rotational velocity pair. The robot only drives forward,
/// so v >= 0 is an invariant the planner maintains.
struct VelocityCommand {
  double v = 0.0;
  double omega = 0.0;

  friend bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

struct Trajectory {
  std::vector<Pose2D> poses;
  double step_dt = 0.0;
  VelocityCommand command;

  const Pose2D& start() const { return poses.front(); }
  const Pose2D& end() const { return poses.back(); }
};

/// Below this turn rate the arc is evaluated as a straight segment.
inline constexpr double kStraightLineOmega = 1e-9;

/// Exact constant-command unicycle motion over dt seconds.
Pose2D integrate_unicycle(const Pose2D& pose, const VelocityCommand& cmd, double dt);

/// Forward-simulates a constant command. Produces ceil(horizon / step_dt) + 1
/// poses; the final step is shortened so the last pose lands exactly at the
/// horizon. Throws std::invalid_argument on a non-positive horizon or step.
Trajectory rollout(const Pose2D& pose, const VelocityCommand& cmd, double horizon, double step_dt);

/// Absolute wrapped difference between the pose heading and the bearing to
/// goal, in [0, pi]. Returns 0 when the goal coincides with the position.
double heading_error(const Pose2D& pose, const Point2D& goal);

double distance(const Point2D& a, const Point2D& b);

}  // namespace dwa
