// Safety audits over sets of timed paths, and the trace file format.
//
// The audit checks the three path conditions over a horizon:
//   1. no robot ever occupies an obstacle cell,
//   2. no two robots occupy the same cell during the same interval,
//   3. no two robots swap cells between consecutive intervals (head-on).
// It reports findings instead of throwing so it can double as a
// diagnostics tool for external traces.
//
// Trace file: a CSV with one line per robot per clock value,
//   clk,robot_id,x,y[,heading]
// with the heading column present exactly for differential-drive robots.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "covplan/grid.hpp"
#include "covplan/motion.hpp"

namespace covplan {

enum class ViolationKind : unsigned char {
  ObstacleHit,
  SameCell,
  HeadOnSwap,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  Clk t = 0;          // interval of the violation (second interval for swaps)
  RobotId a = 0;      // offending robot
  RobotId b = 0;      // other robot (0 for obstacle hits)
  Cell where;         // cell of the collision / obstacle

  std::string describe() const;
};

struct AuditReport {
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
  std::string describe() const;
};

// Per-robot timed paths (robot resting at the endpoints outside its span).
// `horizon` bounds the checked interval range [0, horizon]; pass a negative
// horizon to use the latest t_stop among the paths.
AuditReport validate_path_set(const std::vector<RobotId>& ids,
                              const std::vector<TimedPath>& paths,
                              const Workspace& truth, Clk horizon = -1);

// --- trace files ------------------------------------------------------

struct Trace {
  RobotKind kind = RobotKind::Holonomic;
  Clk horizon = 0;  // rows cover clk 0..horizon inclusive
  std::map<RobotId, TimedPath> robots;  // each anchored at t_start = 0
};

void write_trace(std::ostream& out, const Trace& trace);
std::string trace_to_string(const Trace& trace);

// Parses a trace file. Throws Error on malformed rows, missing clock
// values, or rows whose consecutive states are not one primitive apart.
Trace read_trace(std::istream& in);

}  // namespace covplan
