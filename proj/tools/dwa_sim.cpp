// Command-line front end: run scenario files, replay the built-in cases and
// summarize recorded traces.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "dwa/scenario.hpp"
#include "dwa/simulator.hpp"

namespace {

constexpr int kExitGoal = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCollided = 2;
constexpr int kExitTimeout = 3;

int exit_code_for(dwa::RunStatus status) {
  switch (status) {
    case dwa::RunStatus::GoalReached: return kExitGoal;
    case dwa::RunStatus::Collided: return kExitCollided;
    default: return kExitTimeout;
  }
}

void print_summary(const dwa::RunSummary& s) {
  std::printf("status         %s\n", std::string(dwa::to_string(s.status)).c_str());
  std::printf("time_to_goal   %.3f s\n", s.time_to_goal);
  std::printf("path_length    %.3f m\n", s.path_length);
  std::printf("max_v          %.4f m/s\n", s.max_v);
  std::printf("mean_v         %.4f m/s\n", s.mean_v);
  std::printf("min_clearance  %.4f m\n", s.min_clearance);
}

int execute(const dwa::Scenario& scenario, const std::string& trace_path,
            const std::string& grid_path) {
  const dwa::SimulationResult result = dwa::simulate(scenario);
  if (!trace_path.empty()) {
    dwa::write_file_atomic(trace_path, dwa::write_trace(result.trace));
  }
  if (!grid_path.empty()) {
    dwa::write_file_atomic(grid_path, dwa::to_pgm(result.last_grid));
  }
  const dwa::RunSummary summary = dwa::summarize(result.trace);
  print_summary(summary);
  return exit_code_for(summary.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic window obstacle avoidance simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_path;
  std::string grid_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Simulate a scenario JSON file");
  run->add_option("--scenario", scenario_path, "Scenario document")->required();
  run->add_option("--trace", trace_path, "Write the trace CSV here");
  run->add_option("--grid-dump", grid_path, "Write the last costmap as PGM here");
  run->add_option("--seed", seed, "Override sim.seed");

  int case_id = 0;
  std::string export_path;
  auto* demo = app.add_subcommand("demo", "Run one of the built-in cases");
  demo->add_option("--case", case_id, "Case number")->required()->check(CLI::Range(1, 3));
  demo->add_option("--trace", trace_path, "Write the trace CSV here");
  demo->add_option("--export", export_path, "Write the case as a scenario document and exit");

  auto* summarize = app.add_subcommand("summarize", "Summarize a trace CSV");
  summarize->add_option("--trace", trace_path, "Trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*run) {
      dwa::Scenario scenario = dwa::load_scenario_file(scenario_path);
      if (seed) scenario.sim.seed = *seed;
      return execute(scenario, trace_path, grid_path);
    }
    if (*demo) {
      const dwa::Scenario scenario = dwa::builtin_scenario(case_id);
      if (!export_path.empty()) {
        dwa::write_file_atomic(export_path, dwa::serialize_scenario(scenario));
        return 0;
      }
      return execute(scenario, trace_path, {});
    }
    if (*summarize) {
      print_summary(dwa::summarize(dwa::parse_trace(dwa::read_file(trace_path))));
      return 0;
    }
  } catch (const dwa::ParseError& e) {
    std::cerr << "parse error at byte " << e.position() << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const dwa::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
