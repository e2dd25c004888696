// Cost-optimal goal assignment for one planning round.
//
// Stage one of a round: breadth-first search from every participant over
// the *known-traversable* region of the view snapshot (covered + goal
// cells only -- unexplored cells cannot be driven through), a min-cost
// matching of participants to unassigned goals, and extraction of the
// matched shortest paths from the BFS predecessor forests.
//
// Unreachable (participant, goal) pairs have no cost at all -- infinity is
// represented as an absent optional, never as a large finite number.
#pragma once

#include <optional>
#include <vector>

#include "covplan/grid.hpp"
#include "covplan/motion.hpp"

namespace covplan {

// BFS distances and predecessors over the state graph of one participant.
// States are flattened: holonomic -> cell index; differential drive ->
// cell index * 4 + heading. Expansion order is fixed (holonomic: E,N,W,S;
// differential drive: MoveForward, TurnLeft, TurnRight), which makes the
// first-discoverer predecessor tree -- and hence every extracted path --
// deterministic.
struct ReachTree {
  RobotKind kind = RobotKind::Holonomic;
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> dist;  // -1 = unreachable
  std::vector<std::int32_t> pred;  // flattened predecessor state, -1 = none

  int state_index(const RobotState& s) const;
  RobotState state_of(int index) const;
  int states_per_cell() const {
    return kind == RobotKind::DifferentialDrive ? 4 : 1;
  }

  // Cheapest state at this cell (min over headings for differential
  // drive, ties by heading order E,N,W,S). nullopt when unreachable.
  std::optional<int> best_state_at(Cell c) const;
};

struct CostMatrix {
  std::vector<RobotId> participants;  // row order: ascending robot id
  std::vector<Cell> goals;            // column order: view scan order
  // cost[row * goals.size() + col]; nullopt = unreachable.
  std::vector<std::optional<int>> cost;
  std::vector<ReachTree> trees;  // one per participant

  std::optional<int> at(int row, int col) const {
    return cost[static_cast<std::size_t>(row) * goals.size() + col];
  }
  int rows() const { return static_cast<int>(participants.size()); }
  int cols() const { return static_cast<int>(goals.size()); }
};

// Builds the cost matrix for `participants` (ascending ids, states
// parallel) against unassigned_goals(view, reserved).
CostMatrix compute_optimal_costs(const GridView& view,
                                 const std::vector<Cell>& reserved,
                                 const std::vector<RobotId>& participants,
                                 const std::vector<RobotState>& states,
                                 RobotKind kind);

// Goal choice per participant; nullopt marks an inactive participant
// (left unmatched, or matchable only through unreachable pairs).
struct Assignment {
  std::vector<std::optional<int>> goal_of;  // column index per row
  long long total_cost = 0;
  int matched = 0;

  bool active(int row) const { return goal_of[row].has_value(); }
};

// Minimum-cost matching restricted to finite entries: maximum cardinality
// first, then minimum total cost (successive shortest augmenting paths
// from a super-source). Deterministic: rows and columns are scanned in
// ascending id order and improvements are strict.
Assignment assign_optimal(const CostMatrix& m);

// Shortest path per participant from its BFS tree; inactive participants
// get their singleton current state. Post: extracted length equals the
// matrix cost and every cell is traversable in the snapshot view.
std::vector<Path> extract_optimal_paths(const CostMatrix& m,
                                        const Assignment& a,
                                        const std::vector<RobotState>& states);

}  // namespace covplan
