#include "dwa/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwa {

double normalize_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  if (angle > -kPi && angle <= kPi) {
    return angle;
  }
  double wrapped = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) {
    wrapped += 2.0 * kPi;
  }
  return wrapped;
}

Pose2D integrate_unicycle(const Pose2D& pose, const VelocityCommand& cmd, double dt) {
  if (std::abs(cmd.omega) < kStraightLineOmega) {
    const double step = cmd.v * dt;
    return Pose2D(pose.x + step * std::cos(pose.theta), pose.y + step * std::sin(pose.theta),
                  pose.theta);
  }
  const double radius = cmd.v / cmd.omega;
  const double heading = pose.theta + cmd.omega * dt;
  return Pose2D(pose.x + radius * (std::sin(heading) - std::sin(pose.theta)),
                pose.y - radius * (std::cos(heading) - std::cos(pose.theta)), heading);
}

Trajectory rollout(const Pose2D& pose, const VelocityCommand& cmd, double horizon, double step_dt) {
  if (!(horizon > 0.0) || !(step_dt > 0.0)) {
    throw std::invalid_argument("rollout: horizon and step_dt must be positive");
  }
  if (step_dt > horizon) {
    throw std::invalid_argument("rollout: step_dt must not exceed horizon");
  }
  // 1.5 / 0.1 is 15.000000000000002 in binary; do not let that add a step.
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step_dt - 1e-9));

  Trajectory traj;
  traj.step_dt = step_dt;
  traj.command = cmd;
  traj.poses.reserve(steps + 1);
  traj.poses.push_back(pose);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = std::min(static_cast<double>(k) * step_dt, horizon);
    traj.poses.push_back(integrate_unicycle(pose, cmd, t));
  }
  return traj;
}

double heading_error(const Pose2D& pose, const Point2D& goal) {
  const double dx = goal.x - pose.x;
  const double dy = goal.y - pose.y;
  if (std::hypot(dx, dy) <= 1e-9) {
    return 0.0;
  }
  return std::abs(normalize_angle(std::atan2(dy, dx) - pose.theta));
}

double distance(const Point2D& a, const Point2D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace dwa
