// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dwa/costmap.hpp"
#include "dwa/kinematics.hpp"
#include "dwa/planner.hpp"
#include "dwa/scenario.hpp"
#include "dwa/simulator.hpp"
#include "support.hpp"

namespace {

using namespace dwa;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("[%s] %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t count_status(const std::vector<TraceRecord>& trace, RunStatus s) {
  return std::count_if(trace.begin(), trace.end(),
                       [&](const TraceRecord& r) { return r.status == s; });
}

Outcome velocity_cap() {
  const Scenario s = builtin_scenario(1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = run_scenario(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double max_v = 0.0;
  for (const auto& r : trace) max_v = std::max(max_v, r.cmd.v);
  const bool ok = trace.back().status == RunStatus::GoalReached &&
                  count_status(trace, RunStatus::Collided) == 0 && max_v <= 0.6 && max_v >= 0.59 &&
                  secs < 5.0;
  return {ok, fmt("status=%s max_v=%.6f runtime=%.2fs", std::string(to_string(trace.back().status)).c_str(),
                  max_v, secs)};
}

Outcome case1_slowdown() {
  const auto trace = run_scenario(builtin_scenario(1));
  auto it = std::find_if(trace.begin(), trace.end(), [](const TraceRecord& r) { return r.cmd.v >= 0.59; });
  if (it == trace.end()) return {false, "v never reached 0.59"};
  const double peak_t = it->t;
  for (; it != trace.end(); ++it) {
    if (it->cmd.v <= 0.45 && it->min_clearance < 1.0) {
      return {true, fmt("peak at t=%.2f, v=%.3f with clearance %.3f at t=%.2f", peak_t, it->cmd.v,
                        it->min_clearance, it->t)};
    }
  }
  return {false, "no slowdown near obstacles after the peak"};
}

Outcome case2_dip_recover() {
  const Scenario s = builtin_scenario(2);
  const auto trace = run_scenario(s);
  if (trace.back().status != RunStatus::GoalReached) {
    return {false, fmt("status=%s", std::string(to_string(trace.back().status)).c_str())};
  }
  // Replay the mover alongside the trace to find the closest approach.
  const std::size_t mover = static_cast<std::size_t>(
      std::find_if(s.obstacles.begin(), s.obstacles.end(), [](const Obstacle& o) { return !o.is_static(); }) -
      s.obstacles.begin());
  World world = s.initial_world();
  std::size_t closest = 0;
  double closest_d = 1e300;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double d = distance(trace[k].pose.position(), world.obstacles[mover].center());
    if (d < closest_d) {
      closest_d = d;
      closest = k;
    }
    world = advance_obstacles(std::move(world), s.sim.sim_dt);
  }
  const double v_max = s.robot.limits.v_max;
  const Point2D at = trace[closest].pose.position();
  double dip = 1e300;
  for (const auto& r : trace) {
    if (distance(r.pose.position(), at) <= 1.5) dip = std::min(dip, r.cmd.v);
  }
  double recovered = 0.0;
  for (std::size_t k = closest + 1; k + 1 < trace.size(); ++k) recovered = std::max(recovered, trace[k].cmd.v);
  const bool ok = dip < 0.9 * v_max && recovered >= 0.95 * v_max;
  return {ok, fmt("closest %.3f m at t=%.2f, min v nearby %.3f, later max v %.3f", closest_d,
                  trace[closest].t, dip, recovered)};
}

Outcome case3_completion() {
  const Scenario s = builtin_scenario(3);
  int n_static = 0;
  int n_dynamic = 0;
  for (const auto& o : s.obstacles) (o.is_static() ? n_static : n_dynamic)++;
  const auto trace = run_scenario(s);
  const bool ok = n_static == 2 && n_dynamic == 1 && trace.back().status == RunStatus::GoalReached &&
                  count_status(trace, RunStatus::Collided) == 0;
  return {ok, fmt("%d static + %d dynamic, status=%s at t=%.2f", n_static, n_dynamic,
                  std::string(to_string(trace.back().status)).c_str(), trace.back().t)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240501);
  constexpr int kContexts = 200;
  int mismatches = 0;
  int stops = 0;
  for (int i = 0; i < kContexts; ++i) {
    const auto rc = test::random_context(rng);
    const PlanResult got = plan_detailed(rc.ctx);
    const auto want = test::brute_force_plan(rc.ctx);
    if (!(got.command == want.cmd) || got.emergency_stop != want.emergency) ++mismatches;
    stops += want.emergency ? 1 : 0;
  }
  return {mismatches == 0, fmt("%d contexts (%d emergency stops), %d mismatches", kContexts, stops, mismatches)};
}

Outcome window_and_admissibility() {
  std::mt19937_64 rng(77);
  constexpr int kSteps = 1500;
  int violations = 0;
  int checked = 0;
  for (int i = 0; i < kSteps; ++i) {
    const auto rc = test::random_context(rng);
    const PlanContext& ctx = rc.ctx;
    const PlanResult r = plan_detailed(ctx);
    if (r.emergency_stop) continue;
    ++checked;
    const VelocityCommand c = r.command;
    const RobotLimits& lim = ctx.limits;
    const double dv = lim.accel_v * ctx.params.control_dt;
    const double dw = lim.accel_omega * ctx.params.control_dt;
    const bool in_window = c.v >= std::max(0.0, ctx.current_cmd.v - dv) &&
                           c.v <= std::min(lim.v_max, ctx.current_cmd.v + dv) &&
                           c.omega >= std::max(-lim.omega_max, ctx.current_cmd.omega - dw) &&
                           c.omega <= std::min(lim.omega_max, ctx.current_cmd.omega + dw);
    const Trajectory traj = rollout(ctx.current_pose, c, ctx.params.horizon, ctx.params.rollout_dt);
    const double dist =
        test::brute_trajectory_clearance(*ctx.grid, traj, ctx.footprint_radius, ctx.params.d_max_clearance);
    const bool admissible = c.v <= std::sqrt(2.0 * dist * lim.accel_v) &&
                            std::abs(c.omega) <= std::sqrt(2.0 * dist * lim.accel_omega);
    if (!in_window || !admissible) ++violations;
  }
  return {violations == 0 && checked > 0,
          fmt("%d steps, %d non-emergency checked, %d violations", kSteps, checked, violations)};
}

Outcome safety_suite() {
  constexpr int kScenarios = 60;
  int collided = 0;
  int goals = 0;
  int timeouts = 0;
  std::string first_bad;
  for (int i = 0; i < kScenarios; ++i) {
    const Scenario s = test::random_safety_scenario(1000 + static_cast<std::uint64_t>(i));
    const auto trace = run_scenario(s);
    if (count_status(trace, RunStatus::Collided) > 0) {
      if (first_bad.empty()) first_bad = fmt(" (first: seed %d at t=%.2f)", 1000 + i, trace.back().t);
      ++collided;
    }
    goals += trace.back().status == RunStatus::GoalReached;
    timeouts += trace.back().status == RunStatus::Timeout;
  }
  return {collided == 0, fmt("%d scenarios: %d goal, %d timeout, %d collided%s", kScenarios, goals, timeouts,
                             collided, first_bad.c_str())};
}

Outcome kinematics_accuracy() {
  std::mt19937_64 rng(8);
  constexpr int kCommands = 1000;
  double worst = 0.0;
  for (int i = 0; i < kCommands; ++i) {
    const Pose2D start(test::uniform(rng, -5, 5), test::uniform(rng, -5, 5),
                       test::uniform(rng, -std::numbers::pi, std::numbers::pi));
    const VelocityCommand cmd{test::uniform(rng, 0.0, 1.0), test::uniform(rng, -2.0, 2.0)};
    const Pose2D exact = integrate_unicycle(start, cmd, 1.0);
    const Pose2D euler = test::euler_integrate(start, cmd, 1.0, 1e-5);
    worst = std::max(worst, distance(exact.position(), euler.position()));
  }
  return {worst <= 1e-4, fmt("%d commands, worst endpoint gap %.3e m", kCommands, worst)};
}

Outcome scale_invariance() {
  std::mt19937_64 rng(31337);
  constexpr int kContexts = 100;
  int changed = 0;
  for (int i = 0; i < kContexts; ++i) {
    auto rc = test::random_context(rng);
    const VelocityCommand base = plan(rc.ctx);
    for (double c : {0.1, 3.0, 100.0}) {
      PlanContext scaled = rc.ctx;
      scaled.params.alpha *= c;
      scaled.params.beta *= c;
      scaled.params.gamma *= c;
      if (!(plan(scaled) == base)) ++changed;
    }
  }
  return {changed == 0, fmt("%d contexts x 3 scales, %d changed selections", kContexts, changed)};
}

Outcome costmap_fidelity() {
  const double res = kDefaultResolution;
  World world;
  world.bounds = {0.0, 0.0, 20.0, 20.0};
  const Circle circle{{12.3, 10.4}, 0.45};
  world.obstacles = {{circle, StaticMotion{}}};
  const Pose2D sensor(10.0, 10.0, 0.3);
  LidarModel lidar;
  lidar.beam_count = 360;
  lidar.max_range = 8.0;  // walls are 10 m away, so only the circle returns

  const OccupancyGrid grid =
      integrate_scan(OccupancyGrid::covering(20.0, 20.0, res), sensor, cast_scan(world, sensor, lidar, 1));
  std::size_t occupied = 0;
  double worst = 0.0;
  for (int row = 0; row < grid.height_cells(); ++row) {
    for (int col = 0; col < grid.width_cells(); ++col) {
      if (grid.at({col, row}) != CellState::Occupied) continue;
      ++occupied;
      worst = std::max(worst, std::abs(distance(grid.cell_center({col, row}), circle.center) - circle.radius));
    }
  }
  const bool ok = occupied > 0 && worst <= res / std::sqrt(2.0);
  return {ok, fmt("%zu Occupied cells, worst offset from boundary %.4f m (limit %.4f)", occupied, worst,
                  res / std::sqrt(2.0))};
}

}  // namespace

int main() {
  report(1, "velocity cap (case 1)", velocity_cap());
  report(2, "case 1 slowdown", case1_slowdown());
  report(3, "case 2 dip and recover", case2_dip_recover());
  report(4, "case 3 completion", case3_completion());
  report(5, "oracle equivalence", oracle_equivalence());
  report(6, "window + admissibility", window_and_admissibility());
  report(7, "safety suite", safety_suite());
  report(8, "kinematics accuracy", kinematics_accuracy());
  report(9, "argmax scale invariance", scale_invariance());
  report(10, "costmap fidelity", costmap_fidelity());
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
