#include "dwa/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace dwa {

void RobotLimits::validate() const {
  if (!(v_max > 0.0 && omega_max > 0.0 && accel_v > 0.0 && accel_omega > 0.0)) {
    throw std::invalid_argument("RobotLimits: all limits must be positive");
  }
}

void PlannerParams::validate() const {
  if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0) || alpha + beta + gamma <= 0.0) {
    throw std::invalid_argument("PlannerParams: weights must be non-negative and not all zero");
  }
  if (n_v < 2 || n_omega < 2) {
    throw std::invalid_argument("PlannerParams: need at least two samples per axis");
  }
  if (!(control_dt > 0.0)) {
    throw std::invalid_argument("PlannerParams: control_dt must be positive");
  }
  if (!(rollout_dt > 0.0 && rollout_dt <= horizon)) {
    throw std::invalid_argument("PlannerParams: require 0 < rollout_dt <= horizon");
  }
  if (!(d_max_clearance > 0.0)) {
    throw std::invalid_argument("PlannerParams: d_max_clearance must be positive");
  }
}

VelocityWindow dynamic_window(const VelocityCommand& current_cmd, const RobotLimits& limits,
                              double control_dt) {
  const double dv = limits.accel_v * control_dt;
  const double dw = limits.accel_omega * control_dt;
  VelocityWindow w;
  w.v_lo = std::clamp(current_cmd.v - dv, 0.0, limits.v_max);
  w.v_hi = std::clamp(current_cmd.v + dv, 0.0, limits.v_max);
  w.omega_lo = std::clamp(current_cmd.omega - dw, -limits.omega_max, limits.omega_max);
  w.omega_hi = std::clamp(current_cmd.omega + dw, -limits.omega_max, limits.omega_max);
  return w;
}

bool is_admissible(const VelocityCommand& cmd, double dist, const RobotLimits& limits) {
  const double d = std::max(dist, 0.0);
  return cmd.v <= std::sqrt(2.0 * d * limits.accel_v) &&
         std::abs(cmd.omega) <= std::sqrt(2.0 * d * limits.accel_omega);
}

namespace {

// Endpoints are returned exactly, and a window symmetric about zero yields
// an exact 0 in the middle for odd counts.
double lattice_value(double lo, double hi, int i, int n) {
  if (i == 0) return lo;
  if (i == n - 1) return hi;
  const double span = n - 1;
  return (lo * (n - 1 - i) + hi * i) / span;
}

}  // namespace

std::vector<VelocityCommand> sample_window(const VelocityWindow& window, int n_v, int n_omega) {
  if (n_v < 2 || n_omega < 2) {
    throw std::invalid_argument("sample_window: need at least two samples per axis");
  }
  std::vector<VelocityCommand> samples;
  samples.reserve(static_cast<std::size_t>(n_v) * static_cast<std::size_t>(n_omega));
  for (int i = 0; i < n_v; ++i) {
    const double v = lattice_value(window.v_lo, window.v_hi, i, n_v);
    for (int j = 0; j < n_omega; ++j) {
      samples.push_back({v, lattice_value(window.omega_lo, window.omega_hi, j, n_omega)});
    }
  }
  return samples;
}

double score_heading(const Pose2D& predicted_pose, const Point2D& goal) {
  return 1.0 - heading_error(predicted_pose, goal) / std::numbers::pi;
}

double score_clearance(double dist, double d_max_clearance) {
  return std::clamp(dist, 0.0, d_max_clearance) / d_max_clearance;
}

double score_velocity(double v, double v_max) { return std::clamp(v / v_max, 0.0, 1.0); }

ScoredCandidate evaluate(const VelocityCommand& cmd, const PlanContext& ctx,
                         const ClearanceQuery& clearance) {
  const PlannerParams& p = ctx.params;
  ScoredCandidate c;
  c.command = cmd;
  c.trajectory = rollout(ctx.current_pose, cmd, p.horizon, p.rollout_dt);
  c.dist = clearance.trajectory_clearance(c.trajectory, ctx.footprint_radius);
  c.admissible = is_admissible(cmd, c.dist, ctx.limits);
  c.angle_score = score_heading(c.trajectory.end(), ctx.goal);
  c.dist_score = score_clearance(c.dist, p.d_max_clearance);
  c.vel_score = score_velocity(cmd.v, ctx.limits.v_max);
  c.g = p.alpha * c.angle_score + p.beta * c.dist_score + p.gamma * c.vel_score;
  return c;
}

ScoredCandidate evaluate(const VelocityCommand& cmd, const PlanContext& ctx) {
  if (ctx.grid == nullptr) {
    throw std::invalid_argument("evaluate: context has no grid");
  }
  const ClearanceQuery clearance(*ctx.grid, ctx.params.d_max_clearance);
  return evaluate(cmd, ctx, clearance);
}

bool preferred_over(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (std::abs(a.g - b.g) > kScoreTieTolerance * std::max(std::abs(a.g), std::abs(b.g))) {
    return a.g > b.g;
  }
  if (a.command.v != b.command.v) return a.command.v > b.command.v;
  const double wa = std::abs(a.command.omega);
  const double wb = std::abs(b.command.omega);
  if (wa != wb) return wa < wb;
  return a.command.omega < b.command.omega;
}

VelocityCommand emergency_stop(const VelocityCommand& current_cmd, const RobotLimits& limits,
                               double control_dt) {
  const double dw = limits.accel_omega * control_dt;
  VelocityCommand stop;
  stop.v = std::max(0.0, current_cmd.v - limits.accel_v * control_dt);
  if (std::abs(current_cmd.omega) > dw) {
    stop.omega = current_cmd.omega - std::copysign(dw, current_cmd.omega);
  }
  return stop;
}

PlanResult plan_detailed(const PlanContext& ctx) {
  if (ctx.grid == nullptr) {
    throw std::invalid_argument("plan: context has no grid");
  }
  ctx.limits.validate();
  ctx.params.validate();

  const PlannerParams& p = ctx.params;
  const VelocityWindow window = dynamic_window(ctx.current_cmd, ctx.limits, p.control_dt);
  const auto samples = sample_window(window, p.n_v, p.n_omega);
  const ClearanceQuery clearance(*ctx.grid, p.d_max_clearance);

  std::optional<ScoredCandidate> best;
  for (const auto& cmd : samples) {
    ScoredCandidate c = evaluate(cmd, ctx, clearance);
    if (c.admissible && (!best || preferred_over(c, *best))) {
      best = std::move(c);
    }
  }

  PlanResult result;
  result.candidates_evaluated = samples.size();
  if (best) {
    result.command = best->command;
  } else {
    result.command = emergency_stop(ctx.current_cmd, ctx.limits, p.control_dt);
    result.emergency_stop = true;
  }
  return result;
}

VelocityCommand plan(const PlanContext& ctx) { return plan_detailed(ctx).command; }

}  // namespace dwa
