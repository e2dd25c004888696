// Scenario configuration: parsing, validation, defaults.
//
// A scenario file is either line-oriented `key = value` pairs (with `#`
// comments) or a JSON object with the same keys; both forms accept the
// exact set of keys printed by print_config, so any run is reproducible
// from its printed effective configuration alone.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "covplan/motion.hpp"

namespace covplan {

enum class ClockKind { Virtual, Wall };
enum class MissionMode { Concurrent, Synchronous };
enum class PlannerModel { Instant, Fixed };

struct ScenarioConfig {
  // Workspace: a MovingAI .map path, or "random" to draw one.
  std::string map = "random";
  int width = 16;
  int height = 16;
  double density = 0.2675;

  int robots = 2;
  RobotKind kind = RobotKind::Holonomic;
  std::uint64_t seed = 1;

  MissionMode mode = MissionMode::Concurrent;
  ClockKind clock = ClockKind::Virtual;

  // Virtual-clock planner duration model: per planning attempt.
  PlannerModel planner = PlannerModel::Instant;
  int planner_intervals = 0;  // Fixed model: attempt duration in intervals

  int transport_delay = 0;    // request transit time, intervals
  std::int64_t tau_ms = 1000;
  std::int64_t bias_ms = 0;   // look-ahead safety bias (Wall default: 50)

  int repeats = 1;
  int jobs = 1;               // parallel repeats (independent missions)
  std::string output_dir;     // empty = no artifacts written
  bool emit_trace = true;
  bool emit_round_log = true;

  // Parses one key=value assignment (shared by file/CLI overrides).
  void set(const std::string& key, const std::string& value);
  // Throws ConfigError when any field is out of its documented domain.
  void validate() const;
};

// Parses a config file body in either accepted form.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Effective configuration, one `key = value` per line, every key printed.
std::string print_config(const ScenarioConfig& c);

const char* to_string(ClockKind k);
const char* to_string(MissionMode m);
const char* to_string(PlannerModel p);

}  // namespace covplan
