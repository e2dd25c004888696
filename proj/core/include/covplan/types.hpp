// Basic identifiers and grid coordinates shared by every module.
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace covplan {

// Robot ids are 1-based and dense: a team of R robots is {1, ..., R}.
using RobotId = int;

// Value of the global discrete clock. One clock step spans one interval
// of tau milliseconds of (virtual or wall) time.
using Clk = long long;

// A workspace cell. Coordinates are 1-based: x is the column (1..width),
// y is the row (1..height), rows counted from the top of the map file.
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

}  // namespace covplan

template <>
struct std::hash<covplan::Cell> {
  std::size_t operator()(const covplan::Cell& c) const noexcept {
    return std::hash<long long>()((static_cast<long long>(c.y) << 32) ^
                                  static_cast<unsigned>(c.x));
  }
};
