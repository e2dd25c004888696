// Robot kinematics: states, motion primitives, paths and timed paths.
//
// Two robot kinds are supported:
//  - DifferentialDrive: state is (cell, heading), heading one of E/N/W/S.
//    Primitives: Halt, TurnLeft (90 deg CCW), TurnRight (90 deg CW),
//    MoveForward (one cell along the heading). Turns cost a step.
//  - Holonomic: state is just the cell (heading pinned to East so plain
//    equality works). Primitives: Halt and one move per axis direction.
//
// A path is a state sequence where consecutive states differ by exactly
// one legal primitive. A timed path anchors a path to the global clock:
// the robot occupies path state j during interval t_start + j and rests
// at the final state afterwards.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covplan/errors.hpp"
#include "covplan/types.hpp"

namespace covplan {

enum class RobotKind : unsigned char { DifferentialDrive, Holonomic };

enum class Heading : unsigned char { East = 0, North = 1, West = 2, South = 3 };

enum class Motion : unsigned char {
  Halt,
  TurnLeft,     // differential drive only
  TurnRight,    // differential drive only
  MoveForward,  // differential drive only: one cell along current heading
  MoveEast,     // holonomic only
  MoveNorth,    // holonomic only
  MoveWest,     // holonomic only
  MoveSouth,    // holonomic only
};

const char* to_string(RobotKind k);
const char* to_string(Heading h);
const char* to_string(Motion m);
char heading_letter(Heading h);
std::optional<Heading> heading_from_letter(char c);

// Unit offset of a heading: East = (+1,0), North = (0,+1), West = (-1,0),
// South = (0,-1). Coordinates are 1-based with x the column and y the row;
// map files store row y = 1 as their first body line.
Cell heading_offset(Heading h);

struct RobotState {
  Cell cell;
  Heading heading = Heading::East;  // East for holonomic robots, always

  friend constexpr auto operator<=>(const RobotState&,
                                    const RobotState&) = default;
};

std::string to_string(const RobotState& s);

bool motion_legal(RobotKind kind, Motion m);

// Applies one primitive. Throws Error for a primitive the kind does not
// have, and for a translation that leaves the width x height grid.
RobotState apply_motion(RobotKind kind, const RobotState& s, Motion m,
                        int width, int height);

// The primitive turning `from` into `to`, or nullopt when no single legal
// primitive does.
std::optional<Motion> infer_motion(RobotKind kind, const RobotState& from,
                                   const RobotState& to);

// State sequence; size() >= 1. length() counts steps, not states.
struct Path {
  std::vector<RobotState> states;

  Path() = default;
  explicit Path(std::vector<RobotState> s) : states(std::move(s)) {}
  static Path singleton(const RobotState& s) { return Path({s}); }

  int length() const { return static_cast<int>(states.size()) - 1; }
  const RobotState& front() const { return states.front(); }
  const RobotState& back() const { return states.back(); }

  friend bool operator==(const Path&, const Path&) = default;
};

// Throws Error when any consecutive pair is not one legal primitive apart
// or the path is empty.
void validate_path(RobotKind kind, const Path& p, int width, int height);

// Number of non-Halt steps (every state change is a non-Halt primitive).
// The total step count is path.length().
int path_cost(const Path& p);

// A path anchored to the global clock.
struct TimedPath {
  Path path;
  Clk t_start = 0;

  Clk t_stop() const { return t_start + path.length(); }

  // State during interval t: the first state before t_start, the final
  // state after the path ends (a finished robot halts forever).
  const RobotState& state_at(Clk t) const {
    if (t <= t_start) return path.states.front();
    Clk j = t - t_start;
    if (j >= static_cast<Clk>(path.states.size()))
      return path.states.back();
    return path.states[static_cast<std::size_t>(j)];
  }

  friend bool operator==(const TimedPath&, const TimedPath&) = default;
};

}  // namespace covplan
