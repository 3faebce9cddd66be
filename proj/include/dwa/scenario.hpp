#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dwa/planner.hpp"
#include "dwa/simulator.hpp"

namespace dwa {

struct MapConfig {
  double width = 10.0;
  double height = 8.0;
  double resolution = kDefaultResolution;
  /// Unset means "inflate by the robot footprint radius".
  std::optional<double> inflation_radius;
};

struct RobotConfig {
  Pose2D start;
  double footprint_radius = 0.25;
  /// Extra padding added to the footprint when the planner measures clearance.
  /// Unset means one costmap cell.
  std::optional<double> safety_margin;
  RobotLimits limits;
};

struct GoalConfig {
  Point2D position;
  double tolerance = 0.2;
};

struct SimConfig {
  double sim_dt = 0.05;
  int max_steps = 2000;
  std::uint64_t seed = 0;
};

struct Scenario {
  MapConfig map;
  RobotConfig robot;
  LidarModel lidar;
  GoalConfig goal;
  std::vector<Obstacle> obstacles;
  PlannerParams planner;
  SimConfig sim;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
  World initial_world() const;
  double inflation_radius() const {
    return map.inflation_radius.value_or(robot.footprint_radius);
  }
  /// Footprint the planner subtracts from obstacle distances.
  double planning_footprint() const {
    return robot.footprint_radius + robot.safety_margin.value_or(map.resolution);
  }
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t byte_position, const std::string& message)
      : std::runtime_error(message), position_(byte_position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses and validates a scenario JSON document; missing optional fields get
/// the defaults above.
Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::string& path);
/// Inverse of load_scenario for every validated field.
std::string serialize_scenario(const Scenario& scenario);

/// Reconstructions of the three experiment arrangements (cases 1-3).
/// Throws std::invalid_argument for any other id.
Scenario builtin_scenario(int case_id);

struct RunSummary {
  RunStatus status = RunStatus::Running;
  double time_to_goal = 0.0;
  double path_length = 0.0;
  double max_v = 0.0;
  double min_clearance = 0.0;
  double mean_v = 0.0;
};

inline constexpr std::string_view kTraceHeader = "t,x,y,theta,v,omega,min_clearance,goal_dist,status";

/// CSV with 6 significant digits. Throws std::invalid_argument on an empty trace.
std::string write_trace(const std::vector<TraceRecord>& trace);
/// Reads a document produced by write_trace (candidates_evaluated is not stored).
std::vector<TraceRecord> parse_trace(std::string_view csv);

RunSummary summarize(const std::vector<TraceRecord>& trace);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace dwa
