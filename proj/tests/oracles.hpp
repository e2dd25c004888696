// Independent reference implementations ("oracles") used to cross-check
// the library. Each oracle is written against the contract only, in the
// most direct style possible (brute force, exhaustive enumeration), and
// deliberately shares no code with the production implementation.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "covplan/audit.hpp"
#include "covplan/conflict_resolution.hpp"
#include "covplan/grid.hpp"
#include "covplan/motion.hpp"
#include "covplan/optimal_paths.hpp"

namespace covplan::test {

// Canonical, order-free encoding of an audit finding so reports from
// different implementations can be compared as sets:
// (kind, t, a, b, x, y).
using ViolationKey = std::tuple<int, Clk, RobotId, RobotId, int, int>;

std::multiset<ViolationKey> violation_keys(const AuditReport& report);

// Occupancy-table audit: builds the full (robot x time) position table and
// checks the three path conditions pairwise, O(R^2 * T).
std::multiset<ViolationKey> audit_oracle(const std::vector<RobotId>& ids,
                                         const std::vector<TimedPath>& paths,
                                         const Workspace& truth, Clk horizon);

// Exhaustive assignment search: maximum cardinality first, then minimum
// total cost, over all injective partial assignments restricted to finite
// entries. Only feasible for rows, cols <= 6.
struct AssignmentOracle {
  int matched = 0;
  long long total_cost = 0;
};
AssignmentOracle assignment_oracle(const CostMatrix& m);

// Direct evaluation of the remaining-path definition: the suffix of the
// full path from index t_start, or the singleton last state when the path
// has already ended.
Path remaining_path_oracle(const Path& full, Clk t_start);

// Dijkstra (binary-heap) shortest-path cost over the same restricted
// state graph the BFS uses; an independent check of ReachTree distances.
std::optional<int> dijkstra_cost(const GridView& view, RobotKind kind,
                                 const RobotState& from, Cell to);

// Brute-force pattern scanners over a final resolved robot set.
// Crossover pair: an inactive participant resting on an active
// participant's path, or two active participants whose start cells lie on
// each other's paths.
int count_crossover_pairs(const std::vector<ConflictRobot>& robots);
// Nested pair: both the start and the goal cell of one active participant
// lying on another active participant's path.
int count_nested_pairs(const std::vector<ConflictRobot>& robots);

// Rebuilds the post-resolution robot set (paths and activity from the result)
// so the scanners above can be applied to resolve_conflicts output.
std::vector<ConflictRobot> apply_resolution(std::vector<ConflictRobot> robots,
                                       const ResolutionResult& res);

// Random valid path of exactly `moves` steps starting at `from`,
// restricted to the grid bounds (obstacles ignored; used for kinematics
// property tests only).
Path random_path(SplitMix64& rng, RobotKind kind, const RobotState& from,
                 int width, int height, int moves);

}  // namespace covplan::test
