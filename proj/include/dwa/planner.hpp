#pragma once

#include <cstddef>
#include <vector>

#include "dwa/costmap.hpp"
#include "dwa/kinematics.hpp"

namespace dwa {

/// Velocity-space bounds and acceleration limits. All fields must be > 0.
struct RobotLimits {
  double v_max = 0.6;
  double omega_max = 1.5;
  double accel_v = 0.5;
  double accel_omega = 1.5;

  void validate() const;
  friend bool operator==(const RobotLimits&, const RobotLimits&) = default;
};

struct PlannerParams {
  double alpha = 0.85;  // heading weight
  double beta = 0.15;   // clearance weight
  double gamma = 0.1;   // velocity weight
  double control_dt = 0.2;
  double horizon = 1.5;
  double rollout_dt = 0.1;
  int n_v = 11;
  int n_omega = 21;
  double d_max_clearance = kDefaultMaxClearance;

  void validate() const;
  friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

/// Reachable velocities for one control interval, already clipped to the
/// robot's velocity bounds.
struct VelocityWindow {
  double v_lo = 0.0;
  double v_hi = 0.0;
  double omega_lo = 0.0;
  double omega_hi = 0.0;

  bool contains(const VelocityCommand& cmd) const {
    return cmd.v >= v_lo && cmd.v <= v_hi && cmd.omega >= omega_lo && cmd.omega <= omega_hi;
  }
  friend bool operator==(const VelocityWindow&, const VelocityWindow&) = default;
};

struct ScoredCandidate {
  VelocityCommand command;
  Trajectory trajectory;
  double dist = 0.0;
  double angle_score = 0.0;
  double dist_score = 0.0;
  double vel_score = 0.0;
  bool admissible = false;
  double g = 0.0;
};

struct PlanContext {
  Pose2D current_pose;
  VelocityCommand current_cmd;
  Point2D goal;
  const OccupancyGrid* grid = nullptr;
  double footprint_radius = 0.25;
  RobotLimits limits;
  PlannerParams params;
};

struct PlanResult {
  VelocityCommand command;
  bool emergency_stop = false;
  std::size_t candidates_evaluated = 0;
};

VelocityWindow dynamic_window(const VelocityCommand& current_cmd, const RobotLimits& limits,
                              double control_dt);

/// v <= sqrt(2 dist accel_v) and |omega| <= sqrt(2 dist accel_omega).
bool is_admissible(const VelocityCommand& cmd, double dist, const RobotLimits& limits);

/// n_v x n_omega lattice, endpoints included, v-major order.
std::vector<VelocityCommand> sample_window(const VelocityWindow& window, int n_v, int n_omega);

double score_heading(const Pose2D& predicted_pose, const Point2D& goal);
double score_clearance(double dist, double d_max_clearance);
double score_velocity(double v, double v_max);

/// Evaluates one candidate against a prepared clearance query. plan() uses
/// this to avoid rebuilding the obstacle snapshot per candidate.
ScoredCandidate evaluate(const VelocityCommand& cmd, const PlanContext& ctx,
                         const ClearanceQuery& clearance);
ScoredCandidate evaluate(const VelocityCommand& cmd, const PlanContext& ctx);

/// Objective values closer than this (relative) count as equal, so mirror
/// image candidates whose scores differ only by rounding fall through to the
/// tie-break.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Order used to pick among admissible candidates: higher g, then higher v,
/// then smaller |omega|, then negative omega first.
bool preferred_over(const ScoredCandidate& a, const ScoredCandidate& b);

/// Command issued when nothing in the window is admissible: full braking on
/// both axes.
VelocityCommand emergency_stop(const VelocityCommand& current_cmd, const RobotLimits& limits,
                               double control_dt);

PlanResult plan_detailed(const PlanContext& ctx);
VelocityCommand plan(const PlanContext& ctx);

}  // namespace dwa
