#include <doctest.h>

#include "covplan/optimal_paths.hpp"
#include "covplan/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace covplan;
using namespace covplan::test;

namespace {

// Explored view of a fully-free workspace with the given cells covered
// (participant stands) and everything else still a goal.
GridView view_with_covered(const Workspace& ws,
                           const std::vector<Cell>& covered) {
  GridView v = explored_view(ws);
  for (Cell c : covered) v.set(c, CellClass::Covered);
  return v;
}

CostMatrix synthetic_matrix(const std::vector<std::vector<int>>& rows) {
  CostMatrix m;
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.participants.push_back(static_cast<RobotId>(i + 1));
  for (std::size_t j = 0; j < rows.front().size(); ++j)
    m.goals.push_back({static_cast<int>(j + 1), 1});
  for (const auto& row : rows)
    for (int v : row)
      m.cost.push_back(v < 0 ? std::nullopt : std::optional<int>(v));
  return m;
}

}  // namespace

TEST_CASE("costs: participant adjacent to the sole goal") {
  Workspace ws(2, 1);
  GridView v = view_with_covered(ws, {{1, 1}});
  CostMatrix m = compute_optimal_costs(v, {}, {1}, {at(1, 1)},
                                       RobotKind::Holonomic);
  REQUIRE(m.rows() == 1);
  REQUIRE(m.cols() == 1);
  CHECK(m.at(0, 0) == 1);
}

TEST_CASE("costs: differential drive counts turns as moves") {
  GridView v(3, 3);
  v.set({2, 2}, CellClass::Covered);
  v.set({2, 3}, CellClass::Goal);
  CostMatrix m = compute_optimal_costs(v, {}, {1}, {at(2, 2, Heading::East)},
                                       RobotKind::DifferentialDrive);
  REQUIRE(m.cols() == 1);
  CHECK(m.at(0, 0) == 2);  // turn left, then move

  Assignment a = assign_optimal(m);
  std::vector<Path> paths = extract_optimal_paths(m, a, {at(2, 2)});
  REQUIRE(paths.size() == 1);
  REQUIRE(paths[0].states.size() == 3);
  CHECK(paths[0].states[0] == at(2, 2, Heading::East));
  CHECK(paths[0].states[1] == at(2, 2, Heading::North));
  CHECK(paths[0].states[2] == at(2, 3, Heading::North));
}

TEST_CASE("costs: unexplored cells are not traversable") {
  GridView v(3, 1);
  v.set({1, 1}, CellClass::Covered);
  // (2,1) stays unexplored; (3,1) is a known goal behind it.
  v.set({3, 1}, CellClass::Goal);
  CostMatrix m = compute_optimal_costs(v, {}, {1}, {at(1, 1)},
                                       RobotKind::Holonomic);
  REQUIRE(m.cols() == 1);
  CHECK(!m.at(0, 0).has_value());

  Assignment a = assign_optimal(m);
  CHECK(a.matched == 0);
  CHECK(!a.active(0));
  std::vector<Path> paths = extract_optimal_paths(m, a, {at(1, 1)});
  CHECK(paths[0] == Path::singleton(at(1, 1)));
}

TEST_CASE("costs: reserved goals are excluded from the matrix") {
  Workspace ws(3, 1);
  GridView v = view_with_covered(ws, {{1, 1}});
  CostMatrix m = compute_optimal_costs(v, {{2, 1}}, {1}, {at(1, 1)},
                                       RobotKind::Holonomic);
  REQUIRE(m.cols() == 1);
  CHECK(m.goals[0] == Cell{3, 1});
}

TEST_CASE("assignment: diagonal-dominant 2x2") {
  CostMatrix m = synthetic_matrix({{1, 9}, {9, 1}});
  Assignment a = assign_optimal(m);
  CHECK(a.matched == 2);
  CHECK(a.total_cost == 2);
  CHECK(a.goal_of[0] == 0);
  CHECK(a.goal_of[1] == 1);
}

TEST_CASE("assignment: more participants than goals leaves nulls") {
  CostMatrix m = synthetic_matrix({{3}, {1}, {1}});
  Assignment a = assign_optimal(m);
  CHECK(a.matched == 1);
  CHECK(a.total_cost == 1);
  CHECK(!a.active(0));
  CHECK(a.active(1));  // cost tie broken toward the lower participant id
  CHECK(!a.active(2));
}

TEST_CASE("assignment: ties break lexicographically by (row, column)") {
  CostMatrix m = synthetic_matrix({{1, 1}, {1, 1}});
  Assignment a = assign_optimal(m);
  CHECK(a.matched == 2);
  CHECK(a.goal_of[0] == 0);
  CHECK(a.goal_of[1] == 1);
}

TEST_CASE("assignment: infinite entries never matched") {
  CostMatrix m = synthetic_matrix({{-1, -1}, {-1, 4}});
  Assignment a = assign_optimal(m);
  CHECK(a.matched == 1);
  CHECK(a.total_cost == 4);
  CHECK(!a.active(0));
  CHECK(a.goal_of[1] == 1);
}

TEST_CASE("assignment: cardinality beats cost") {
  // Matching both rows forces total 101; one row alone could cost 1.
  CostMatrix m = synthetic_matrix({{1, 100}, {1, -1}});
  Assignment a = assign_optimal(m);
  CHECK(a.matched == 2);
  CHECK(a.total_cost == 101);
  CHECK(a.goal_of[0] == 1);
  CHECK(a.goal_of[1] == 0);
}

TEST_CASE("assignment: matches the exhaustive oracle on random matrices") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(6));
    int cols = 1 + static_cast<int>(rng.below(6));
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(rows));
    for (auto& row : grid)
      for (int j = 0; j < cols; ++j)
        row.push_back(rng.below(5) == 0
                          ? -1
                          : static_cast<int>(1 + rng.below(9)));
    CostMatrix m = synthetic_matrix(grid);
    Assignment a = assign_optimal(m);
    AssignmentOracle o = assignment_oracle(m);
    CHECK(a.matched == o.matched);
    CHECK(a.total_cost == o.total_cost);
  }
}

TEST_CASE("costs: BFS distances agree with Dijkstra on random views") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Workspace ws = Workspace::random(8, 8, 0.2, rng);
    auto free_cells = ws.free_cells();
    Cell start =
        free_cells[static_cast<std::size_t>(rng.below(free_cells.size()))];
    GridView v = view_with_covered(ws, {start});
    RobotKind kind = trial % 2 == 0 ? RobotKind::Holonomic
                                    : RobotKind::DifferentialDrive;
    RobotState s{start, Heading::North};
    CostMatrix m = compute_optimal_costs(v, {}, {1}, {s}, kind);
    for (int j = 0; j < m.cols(); ++j)
      CHECK(m.at(0, j) == dijkstra_cost(v, kind, s, m.goals[j]));
  }
}

TEST_CASE("extraction: path length equals matrix cost, cells traversable") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Workspace ws = Workspace::random(8, 8, 0.25, rng);
    auto free_cells = ws.free_cells();
    rng.shuffle(free_cells);
    std::vector<Cell> starts(free_cells.begin(), free_cells.begin() + 3);
    GridView v = view_with_covered(ws, starts);
    std::vector<RobotState> states;
    for (Cell c : starts) states.push_back({c, Heading::East});

    CostMatrix m =
        compute_optimal_costs(v, {}, {1, 2, 3}, states, RobotKind::Holonomic);
    Assignment a = assign_optimal(m);
    std::vector<Path> paths = extract_optimal_paths(m, a, states);

    for (int i = 0; i < 3; ++i) {
      const Path& p = paths[static_cast<std::size_t>(i)];
      CHECK(p.front() == states[static_cast<std::size_t>(i)]);
      validate_path(RobotKind::Holonomic, p, 8, 8);
      for (const RobotState& s : p.states) CHECK(v.traversable(s.cell));
      if (a.active(i)) {
        CHECK(p.length() == *m.at(i, *a.goal_of[static_cast<std::size_t>(i)]));
        CHECK(p.back().cell ==
              m.goals[static_cast<std::size_t>(*a.goal_of[
                  static_cast<std::size_t>(i)])]);
      } else {
        CHECK(p.length() == 0);
      }
    }
  }
}

TEST_CASE("assignment determinism: identical snapshot, identical result") {
  SplitMix64 rng(555);
  Workspace ws = Workspace::random(10, 10, 0.25, rng);
  auto free_cells = ws.free_cells();
  std::vector<Cell> starts = {free_cells[0], free_cells[5], free_cells[9]};
  GridView v = view_with_covered(ws, starts);
  std::vector<RobotState> states;
  for (Cell c : starts) states.push_back({c, Heading::East});

  CostMatrix m1 =
      compute_optimal_costs(v, {}, {1, 2, 3}, states, RobotKind::Holonomic);
  CostMatrix m2 =
      compute_optimal_costs(v, {}, {1, 2, 3}, states, RobotKind::Holonomic);
  Assignment a1 = assign_optimal(m1);
  Assignment a2 = assign_optimal(m2);
  CHECK(a1.goal_of == a2.goal_of);
  CHECK(a1.total_cost == a2.total_cost);
  CHECK(extract_optimal_paths(m1, a1, states) ==
        extract_optimal_paths(m2, a2, states));
}
