#include "covplan/motion.hpp"

namespace covplan {

const char* to_string(RobotKind k) {
  return k == RobotKind::DifferentialDrive ? "diffdrive" : "holonomic";
}

const char* to_string(Heading h) {
  switch (h) {
    case Heading::East: return "east";
    case Heading::North: return "north";
    case Heading::West: return "west";
    case Heading::South: return "south";
  }
  return "?";
}

const char* to_string(Motion m) {
  switch (m) {
    case Motion::Halt: return "halt";
    case Motion::TurnLeft: return "turn-left";
    case Motion::TurnRight: return "turn-right";
    case Motion::MoveForward: return "move-forward";
    case Motion::MoveEast: return "move-east";
    case Motion::MoveNorth: return "move-north";
    case Motion::MoveWest: return "move-west";
    case Motion::MoveSouth: return "move-south";
  }
  return "?";
}

char heading_letter(Heading h) {
  switch (h) {
    case Heading::East: return 'E';
    case Heading::North: return 'N';
    case Heading::West: return 'W';
    case Heading::South: return 'S';
  }
  return '?';
}

std::optional<Heading> heading_from_letter(char c) {
  switch (c) {
    case 'E': return Heading::East;
    case 'N': return Heading::North;
    case 'W': return Heading::West;
    case 'S': return Heading::South;
    default: return std::nullopt;
  }
}

Cell heading_offset(Heading h) {
  switch (h) {
    case Heading::East: return {1, 0};
    case Heading::North: return {0, 1};
    case Heading::West: return {-1, 0};
    case Heading::South: return {0, -1};
  }
  return {0, 0};
}

std::string to_string(const RobotState& s) {
  return to_string(s.cell) + heading_letter(s.heading);
}

bool motion_legal(RobotKind kind, Motion m) {
  if (m == Motion::Halt) return true;
  if (kind == RobotKind::DifferentialDrive)
    return m == Motion::TurnLeft || m == Motion::TurnRight ||
           m == Motion::MoveForward;
  return m == Motion::MoveEast || m == Motion::MoveNorth ||
         m == Motion::MoveWest || m == Motion::MoveSouth;
}

namespace {

Heading rotate_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}

Heading rotate_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}

Heading heading_of_move(Motion m) {
  switch (m) {
    case Motion::MoveEast: return Heading::East;
    case Motion::MoveNorth: return Heading::North;
    case Motion::MoveWest: return Heading::West;
    default: return Heading::South;
  }
}

}  // namespace

RobotState apply_motion(RobotKind kind, const RobotState& s, Motion m,
                        int width, int height) {
  if (!motion_legal(kind, m))
    throw Error(std::string("motion ") + to_string(m) + " is not legal for " +
                to_string(kind) + " robots");
  RobotState out = s;
  switch (m) {
    case Motion::Halt:
      return out;
    case Motion::TurnLeft:
      out.heading = rotate_left(s.heading);
      return out;
    case Motion::TurnRight:
      out.heading = rotate_right(s.heading);
      return out;
    case Motion::MoveForward:
    case Motion::MoveEast:
    case Motion::MoveNorth:
    case Motion::MoveWest:
    case Motion::MoveSouth: {
      Heading dir = m == Motion::MoveForward ? s.heading : heading_of_move(m);
      Cell d = heading_offset(dir);
      out.cell = {s.cell.x + d.x, s.cell.y + d.y};
      if (out.cell.x < 1 || out.cell.x > width || out.cell.y < 1 ||
          out.cell.y > height)
        throw Error("motion " + std::string(to_string(m)) + " from " +
                    to_string(s.cell) + " leaves the workspace");
      return out;
    }
  }
  throw Error("unhandled motion");
}

std::optional<Motion> infer_motion(RobotKind kind, const RobotState& from,
                                   const RobotState& to) {
  if (kind == RobotKind::DifferentialDrive) {
    if (from.cell == to.cell) {
      if (from.heading == to.heading) return Motion::Halt;
      if (rotate_left(from.heading) == to.heading) return Motion::TurnLeft;
      if (rotate_right(from.heading) == to.heading) return Motion::TurnRight;
      return std::nullopt;
    }
    if (from.heading != to.heading) return std::nullopt;
    Cell d = heading_offset(from.heading);
    if (to.cell.x == from.cell.x + d.x && to.cell.y == from.cell.y + d.y)
      return Motion::MoveForward;
    return std::nullopt;
  }

  if (from.heading != to.heading) return std::nullopt;
  int dx = to.cell.x - from.cell.x;
  int dy = to.cell.y - from.cell.y;
  if (dx == 0 && dy == 0) return Motion::Halt;
  if (dx == 1 && dy == 0) return Motion::MoveEast;
  if (dx == 0 && dy == 1) return Motion::MoveNorth;
  if (dx == -1 && dy == 0) return Motion::MoveWest;
  if (dx == 0 && dy == -1) return Motion::MoveSouth;
  return std::nullopt;
}

void validate_path(RobotKind kind, const Path& p, int width, int height) {
  if (p.states.empty()) throw Error("path has no states");
  for (const RobotState& s : p.states) {
    if (s.cell.x < 1 || s.cell.x > width || s.cell.y < 1 ||
        s.cell.y > height)
      throw Error("path state " + to_string(s.cell) + " is out of bounds");
    if (kind == RobotKind::Holonomic && s.heading != Heading::East)
      throw Error("holonomic path state carries a heading");
  }
  for (std::size_t j = 1; j < p.states.size(); ++j) {
    if (!infer_motion(kind, p.states[j - 1], p.states[j]))
      throw Error("path states " + to_string(p.states[j - 1]) + " -> " +
                  to_string(p.states[j]) +
                  " are not one legal primitive apart");
  }
}

int path_cost(const Path& p) {
  int cost = 0;
  for (std::size_t j = 1; j < p.states.size(); ++j)
    if (p.states[j] != p.states[j - 1]) ++cost;
  return cost;
}

}  // namespace covplan
