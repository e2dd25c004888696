// Mission harness: runs a full coverage mission and reports on it.
//
// Two clock backends share the protocol stack (coordinator + planning
// rounds). The virtual backend is a single-threaded discrete-event loop
// over integer milliseconds whose entire report is a pure function of
// (config, seed); the wall-clock backend runs one thread per robot
// against the real clock, so its wall-time fields are nondeterministic.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "covplan/audit.hpp"
#include "covplan/config.hpp"
#include "covplan/coordinator.hpp"
#include "covplan/grid.hpp"
#include "covplan/metrics.hpp"

namespace covplan {

struct MissionReport {
  // Scenario identity.
  std::uint64_t seed = 0;
  int robots = 0;
  int width = 0;
  int height = 0;
  MissionMode mode = MissionMode::Concurrent;

  // Outcome.
  StopReason stop_reason = StopReason::CoverageComplete;
  int covered = 0;      // |W_c| in the final global view
  int free_cells = 0;   // |W_free| in truth
  bool coverage_complete = false;

  // Time decomposition (milliseconds of virtual or wall time).
  std::int64_t t_m_ms = 0;     // mission time
  std::int64_t t_c_ms = 0;     // total computation time
  std::int64_t t_c_ol_ms = 0;  // computation overlapped with following
  std::int64_t t_p_ms = 0;     // path-following time
  Clk lambda = 0;              // final clock value
  std::int64_t t_non_halt_ms = 0;  // state-changing moves, total
  std::int64_t t_halt_ms = 0;      // in-path Halt moves, total

  // Round statistics.
  int rounds = 0;
  int retries_total = 0;
  int max_round_attempts = 0;
  double r_star_mean = 0.0;  // mean participants per round
  IntervalClasses intervals;

  // Artifacts.
  std::vector<RoundLogRecord> round_log;
  Trace trace;               // full per-robot trajectories, anchored at 0
  AuditReport audit;         // conditions 1-3 over the full trajectories

  std::string to_json() const;      // canonical, key-sorted, deterministic
  static std::string csv_header();  // fixed column set, documented in-repo
  std::string csv_row(int run_id) const;
};

// Runs one mission per config.clock. Virtual mode: deterministic event
// loop. Wall mode: real threads, real clock. Throws ConfigError for bad
// scenarios (including a free space that is not connected) and
// InvariantError when a runtime invariant breaks mid-mission.
MissionReport run_mission(const ScenarioConfig& config);

// The deterministic backend, callable directly with a prepared workspace
// (used by tests that need full control of the map).
MissionReport run_mission_virtual(const ScenarioConfig& config,
                                  const Workspace& truth);

// The wall-clock backend (config.tau_ms may be small in tests).
MissionReport run_mission_wallclock(const ScenarioConfig& config,
                                    const Workspace& truth);

// Draws the workspace a config describes: parses config.map as a file
// path, or generates a connected random map from the seed.
Workspace make_workspace(const ScenarioConfig& config);

// Deploys robots on distinct free cells, uniformly from the run seed;
// differential-drive headings are drawn from the same stream.
std::vector<RobotState> deploy_robots(const Workspace& truth, int robots,
                                      RobotKind kind, std::uint64_t seed);

// Aggregation across repeats: mean and sample standard deviation per
// numeric metric, recomputable from the per-run CSV rows.
struct AggregateRow {
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
};
std::vector<AggregateRow> aggregate_reports(
    const std::vector<MissionReport>& runs);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

}  // namespace covplan
