// Error taxonomy. The CLI maps these onto process exit codes:
// usage errors -> 1, config/map errors -> 2, invariant violations -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace covplan {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed map file. Carries the 1-based line (and column where it makes
// sense) of the offending input.
class MapParseError : public Error {
 public:
  MapParseError(int line, int col, const std::string& what)
      : Error("map parse error at line " + std::to_string(line) +
              (col > 0 ? ", column " + std::to_string(col) : std::string()) +
              ": " + what),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_;
  int col_;
};

// Bad scenario configuration (unknown key, invalid value, unusable map).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two views disagree about the ground truth of a cell (e.g. one claims
// obstacle, the other claims free). Sensing is exact, so this can only be
// a programming error or corrupted input -- it is never reconciled.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// A robot or the coordinator broke the request/response protocol
// (e.g. a robot sent a second request while one is already pending).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// An internal invariant did not hold (planner produced an unsafe or
// inconsistent result). Always a bug, never a recoverable condition.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Throws InvariantError when cond is false. Used for invariants that are
// cheap enough to keep on in release builds.
inline void require(bool cond, const char* msg) {
  if (!cond) throw InvariantError(msg);
}

}  // namespace covplan
