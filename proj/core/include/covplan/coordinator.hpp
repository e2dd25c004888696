// Central planner bookkeeping: participants, rounds, and full paths.
//
// The coordinator owns the fused global view, the per-robot full paths
// (state per clock interval since mission start), and the participation
// protocol that decides when a planning round may start. It is exercised
// single-threaded by the virtual-time simulator and under a real mutex by
// the wall-clock runtime; all public methods are thread-safe.
//
// The planning computation itself (assignment + conflict resolution) is
// deliberately *not* run under the coordinator lock -- callers receive a
// RoundStartInfo snapshot, plan against it, and hand the result back to
// complete_round. New requests can therefore arrive mid-round.
#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "covplan/conflict_resolution.hpp"
#include "covplan/grid.hpp"
#include "covplan/motion.hpp"
#include "covplan/types.hpp"

namespace covplan {

// Skip is a Wait that raised the intended participant count first: goals
// exist but all of them are reserved, so the present participants hold on
// until more of the team reports in.
enum class Decision { Wait, Skip, Start, Stop };
enum class StopReason {
  CoverageComplete,  // no unassigned goals and every robot is idle
  Stalled,           // idle robots remain but no known goal is assignable
};

struct RequestMsg {
  RobotId id = 0;
  RobotState state;
  GridView view;
};

// Snapshot handed to the planner when a round starts. Everything is
// copied: the round may run while the coordinator keeps mutating.
struct RoundStartInfo {
  int round_id = 0;
  Clk clk_begin = 0;
  GridView view;                              // fused view at round start
  std::vector<Cell> reserved;                 // goals held by non-participants
  std::vector<RobotId> participants;          // ascending
  std::vector<RobotState> participant_states; // parallel
  std::vector<RobotId> non_participants;      // ascending
  std::vector<Path> committed;                // full paths, parallel
};

struct Dispatch {
  RobotId id = 0;
  Path path;      // the scheduled path, offsets already applied
  Clk t_start = 0;
};

// One row of the round log CSV.
struct RoundLogRecord {
  int round_id = 0;
  Clk clk_begin = 0;
  Clk clk_end = 0;
  std::int64_t t_wall_ms = 0;
  int r_star = 0;  // participants in the snapshot
  int n_active = 0;
  int n_inactive = 0;
  Clk t_start = 0;
  int retries = 0;

  static std::string csv_header();
  std::string csv_row() const;
};

struct CoordinatorOutcome {
  Decision decision = Decision::Wait;
  std::optional<RoundStartInfo> start;      // set when decision == Start
  std::optional<StopReason> stop_reason;    // set when decision == Stop
};

struct RoundCompletion {
  std::vector<Dispatch> dispatches;  // active participants only
  RoundLogRecord log;
  CoordinatorOutcome next;           // criteria re-check after bookkeeping
};

// How the intended participant count evolves. Dynamic is the concurrent
// protocol; FullTeam pins it at the team size, which degenerates into a
// strictly synchronous all-hands round cycle (used as a baseline).
enum class EtaMode { Dynamic, FullTeam };

class Coordinator {
 public:
  Coordinator(int team_size, int width, int height,
              EtaMode mode = EtaMode::Dynamic);

  // Registers a request: fuses the view, adds the robot to the participant
  // set, and re-evaluates the start/stop/skip criteria. `now` is the
  // global clock interval in which the request is processed.
  CoordinatorOutcome receive_local_view(const RequestMsg& req, Clk now);

  // Applies a finished round: extends full paths (rest padding + the new
  // path per active), re-enqueues inactive participants, updates the
  // intended participant count, releases the round lock, and re-evaluates
  // the criteria. Returns the dispatches for the active participants.
  RoundCompletion complete_round(const RoundStartInfo& info,
                                 const RoundResult& result, Clk now);

  // Mission-start registration: fixes the robot's initial state so its
  // full path is anchored before any request is processed.
  void register_robot(RobotId id, const RobotState& start);

  const GridView& global_view() const { return view_; }
  const std::map<RobotId, Path>& full_paths() const { return pi_; }
  Clk stop_time(RobotId id) const { return t_stop_.at(id); }
  int eta() const;
  bool round_in_flight() const;
  int rounds_started() const { return round_seq_; }
  // Times increment_eta found nobody still moving (a benign no-op).
  int eta_warnings() const;
  std::vector<Cell> reserved_goals() const;  // exposed for tests
  const std::vector<RoundLogRecord>& round_log() const { return log_; }

 private:
  CoordinatorOutcome check_criteria(Clk now);
  void increment_eta(const std::vector<RobotId>& ids, Clk now);
  std::vector<RobotId> complement(const std::vector<RobotId>& ids) const;
  std::vector<Cell> reserved_goals_locked(
      const std::vector<RobotId>& non_participants) const;

  mutable std::mutex mu_;
  int team_size_;
  EtaMode mode_;
  GridView view_;
  std::vector<RobotId> i_par_;            // current participants, ascending
  std::map<RobotId, RobotState> states_;  // participant states
  std::map<RobotId, Path> pi_;            // full paths, anchored at clock 0
  std::map<RobotId, Clk> t_stop_;         // invariant: t_stop == pi.length()
  int eta_ = 0;
  bool in_flight_ = false;
  int round_seq_ = 0;
  int eta_warnings_ = 0;
  std::vector<RoundLogRecord> log_;
};

// Extends a full path (anchored at 0) with a new segment anchored at
// t_start: rest padding at the current final state up to t_start, then the
// segment. Handles the synchronous edge where the segment begins exactly
// at the path's final interval (the duplicated state is skipped).
void append_full_path(Path& full, const Path& segment, Clk t_start);

}  // namespace covplan
