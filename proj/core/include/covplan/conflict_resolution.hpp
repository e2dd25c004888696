// Conflict-free start-time scheduling for one planning round.
//
// Stage two of a round. Freshly assigned participant paths may interfere
// with each other and with the in-flight remaining paths of robots that
// did not participate; this module repairs goal/path overlap patterns
// (crossover and nested assignments), orders the participants by
// precedence, chooses per-robot start offsets so that no two robots ever
// collide, and wraps everything in the planning-round driver that retries
// with a larger look-ahead when the computation itself overran its start
// time.
//
// Non-participant paths are immutable here: they were dispatched in
// earlier rounds and the robots are already executing them.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covplan/grid.hpp"
#include "covplan/motion.hpp"
#include "covplan/types.hpp"

namespace covplan {

// Remaining portion of a committed full path (anchored at clock 0) from
// interval t_start on: the suffix starting at index t_start when the path
// still extends past it, otherwise the singleton final state.
Path remaining_path(const Path& full, Clk t_start);

// Applies remaining_path to every non-participant's full path.
std::map<RobotId, Path> remaining_paths(
    const std::map<RobotId, Path>& full_paths,
    const std::vector<RobotId>& non_participants, Clk t_start);

// --- Conflict resolution ---------------------------------------------------

// Per-robot input to conflict resolution. Participants carry the newly
// assigned path (or their singleton state when inactive); non-participants
// carry the remaining portion of their committed path. All paths are
// anchored at the round's T_start.
struct ConflictRobot {
  RobotId id = 0;
  bool participant = false;
  bool active = false;  // participants only; moving non-participants too
  Path path;
  std::optional<Cell> goal;  // assigned goal, participants only
};

// One robot made inactive during conflict resolution, with the reason --
// surfaced in round diagnostics.
struct InactivationEvent {
  RobotId id = 0;
  std::string reason;
};

struct ResolutionResult {
  // Halt-prefix length per participant id (0 for inactive participants).
  std::map<RobotId, int> offsets;
  // Final activity and (possibly repaired, offset-free) path per
  // participant id.
  std::map<RobotId, bool> active;
  std::map<RobotId, Path> paths;
  std::vector<InactivationEvent> inactivations;
  int iterations = 0;  // outer repair/schedule loop count
};

// Precedence relation: at(a, b) means robot ids[a] must act before robot
// ids[b] can move. Only active participants ever appear as targets.
struct PrecedenceMatrix {
  std::vector<RobotId> ids;  // all robots of the instance, ascending
  std::vector<std::uint8_t> edges;  // row-major ids x ids

  bool at(int a, int b) const {
    return edges[static_cast<std::size_t>(a) * ids.size() + b] != 0;
  }
};

struct AbsolutePrecedence {
  std::vector<RobotId> order;          // active participants, schedule order
  std::vector<RobotId> cycle_witness;  // non-empty when a cycle was found
  bool acyclic() const { return cycle_witness.empty(); }
};

// Produces a shortest path for (robot index into the resolver instance, goal)
// when a repair hands a robot a different goal. Backed by the assignment
// stage's search trees in production; tests may supply table lookups.
using PathExtractor = std::function<Path(int robot_index, Cell goal)>;

// Crossover repair between participants: if an inactive participant rests
// on an active one's path, or two active participants' start cells lie on
// each other's paths, the two swap goals and paths are re-extracted.
// Runs to a fixpoint; returns the number of swaps applied.
int adjust_crossover_paths(std::vector<ConflictRobot>& robots,
                           const PathExtractor& extract);

// Nested repair between active participants: when both the start and the
// goal of one robot lie on another's path, the containing paths form a
// forest; goals are redistributed pre-order robots to post-order goals so
// every chain unwinds from the inside out. Returns the number of robots
// whose goal changed.
int adjust_nested_paths(std::vector<ConflictRobot>& robots,
                        const PathExtractor& extract);

// Relative precedences: edge a -> b (b an active participant) when a's
// start cell lies on b's path (a must depart first) or b's goal cell lies
// on a's path (a must pass over it before b parks there).
PrecedenceMatrix compute_precedences(const std::vector<ConflictRobot>& robots);

// Deterministic topological order over active participants (Kahn, lowest
// id first among ready nodes) or a witness cycle.
AbsolutePrecedence absolute_precedence(const PrecedenceMatrix& m,
                                       const std::vector<ConflictRobot>& robots);

// Inactivates the lowest-id participant of the witness cycle (its path
// collapses to its start state). Returns the victim.
RobotId break_precedence_cycles(std::vector<ConflictRobot>& robots,
                                const std::vector<RobotId>& cycle);

// Minimal Halt-prefix per active participant, processed in `order`:
// each offset is the smallest count >= 0 making the path conflict-free
// (same-cell and head-on conditions) against every already-committed
// path -- all non-participants, inactive participants, and previously
// processed actives. A participant blocked at every offset is inactivated
// and becomes a committed obstacle itself. Returns true when no robot was
// inactivated.
bool compute_start_offsets(std::vector<ConflictRobot>& robots,
                           const std::vector<RobotId>& order,
                           std::map<RobotId, int>& offsets,
                           std::vector<InactivationEvent>& events);

// Full conflict-free path finding: repair crossover and nested patterns,
// order by precedence (breaking cycles), offset start times; repeat until
// the offsets succeed with no further inactivation.
ResolutionResult resolve_conflicts(std::vector<ConflictRobot> robots,
                      const PathExtractor& extract);

// --- Planning-round driver -------------------------------------------------

// Clock a planning round runs against. The virtual simulator scripts it;
// the wall-clock runtime backs it with the real steady clock.
class PlanningClock {
 public:
  virtual ~PlanningClock() = default;
  virtual std::int64_t now_ms() = 0;  // monotonic milliseconds since start
  Clk clk(std::int64_t tau_ms) { return now_ms() / tau_ms; }
};

// Look-ahead update after an attempt that began at t_start_ms and missed
// its start time, finishing at t_end_ms: budgets a second attempt of the
// same duration plus a safety bias. `now` is the clock interval at
// t_end_ms.
int update_lookahead(std::int64_t t_start_ms, std::int64_t t_end_ms,
                     std::int64_t bias_ms, std::int64_t tau_ms, Clk now);

struct RoundAttempt {
  int lookahead = 0;
  Clk t_start = 0;
  std::int64_t began_ms = 0;
  std::int64_t ended_ms = 0;
  bool success = false;
};

// Snapshot input of one planning round (robots only; the view snapshot
// travels alongside).
struct RoundInput {
  std::vector<RobotId> participants;           // ascending
  std::vector<RobotState> participant_states;  // parallel
  std::vector<RobotId> non_participants;       // ascending
  std::vector<Path> committed;                 // full paths, parallel
  std::vector<Cell> reserved;                  // reserved goals, sorted
};

struct RoundResult {
  Clk t_start = 0;
  // Scheduled path per participant id: offset Halt prefix + repaired path,
  // anchored at t_start. Inactive participants keep a singleton.
  std::map<RobotId, Path> scheduled;
  std::map<RobotId, bool> active;
  std::map<RobotId, int> offsets;
  std::vector<RobotId> actives;  // ascending ids with active == true
  std::vector<InactivationEvent> inactivations;
  std::vector<RoundAttempt> attempts;
  long long assignment_cost = 0;
  int matched = 0;
  std::int64_t duration_ms = 0;  // first attempt begin to last attempt end

  int retries() const { return static_cast<int>(attempts.size()) - 1; }
};

struct RoundParams {
  RobotKind kind = RobotKind::Holonomic;
  std::int64_t tau_ms = 1000;
  std::int64_t bias_ms = 0;
  // Synchronous baseline: single attempt with T_start = CLK (the fleet is
  // parked while planning runs, so paths may start immediately).
  bool synchronous = false;
};

// One complete planning round: cost-optimal assignment once, then the
// schedule/retry loop until the scheduled paths start strictly in the
// future (at most two attempts by construction of update_lookahead,
// provided the second attempt runs no longer than the first plus bias).
RoundResult plan_round(const GridView& view, const RoundParams& params,
                           const RoundInput& in, PlanningClock& clock);

}  // namespace covplan
