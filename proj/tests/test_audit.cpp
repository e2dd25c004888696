#include <doctest.h>

#include <sstream>

#include "covplan/audit.hpp"
#include "covplan/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace covplan;
using namespace covplan::test;

TEST_CASE("audit: stationary robots on distinct cells are clean") {
  Workspace ws(4, 4);
  std::vector<TimedPath> paths = {{Path::singleton(at(1, 1)), 0},
                                  {Path::singleton(at(3, 3)), 0}};
  AuditReport r = validate_path_set({1, 2}, paths, ws, 10);
  CHECK(r.clean());
}

TEST_CASE("audit: adjacent swap yields exactly one head-on violation") {
  Workspace ws(4, 1);
  std::vector<TimedPath> paths = {
      {cells_path({{1, 1}, {2, 1}}), 0},
      {cells_path({{2, 1}, {1, 1}}), 0},
  };
  AuditReport r = validate_path_set({1, 2}, paths, ws, 1);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == ViolationKind::HeadOnSwap);
  CHECK(r.violations[0].t == 1);
  CHECK(r.violations[0].a == 1);
  CHECK(r.violations[0].b == 2);
}

TEST_CASE("audit: same-cell and obstacle violations are reported") {
  Workspace ws = ws_from_rows({"..@", "..."});

  // Robot 2 drives into robot 1's resting cell.
  std::vector<TimedPath> same = {
      {Path::singleton(at(2, 2)), 0},
      {cells_path({{1, 2}, {2, 2}}), 0},
  };
  AuditReport r1 = validate_path_set({1, 2}, same, ws, 2);
  REQUIRE(!r1.clean());
  CHECK(r1.violations[0].kind == ViolationKind::SameCell);
  CHECK(r1.violations[0].where == Cell{2, 2});

  // A path through the obstacle cell.
  std::vector<TimedPath> obs = {{cells_path({{2, 1}, {3, 1}}), 0}};
  AuditReport r2 = validate_path_set({1}, obs, ws, 1);
  REQUIRE(!r2.clean());
  CHECK(r2.violations[0].kind == ViolationKind::ObstacleHit);
  CHECK(r2.violations[0].where == Cell{3, 1});
}

TEST_CASE("audit: padding a clean set with trailing halts keeps it clean") {
  Workspace ws(5, 5);
  std::vector<TimedPath> paths = {
      {cells_path({{1, 1}, {2, 1}, {3, 1}}), 0},
      {cells_path({{1, 3}, {2, 3}}), 2},
  };
  CHECK(validate_path_set({1, 2}, paths, ws, 4).clean());
  // Larger horizon only extends the trailing rest.
  CHECK(validate_path_set({1, 2}, paths, ws, 50).clean());
}

TEST_CASE("audit: agrees with the occupancy-table oracle on random scenes") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    Workspace ws = Workspace::random(5, 5, 0.15, rng);
    auto free_cells = ws.free_cells();
    std::vector<RobotId> ids;
    std::vector<TimedPath> paths;
    for (int i = 0; i < 4; ++i) {
      Cell start =
          free_cells[static_cast<std::size_t>(rng.below(free_cells.size()))];
      // Paths wander freely (obstacles included) to exercise every kind.
      Path p = random_path(rng, RobotKind::Holonomic,
                           {start, Heading::East}, 5, 5, 10);
      ids.push_back(i + 1);
      paths.push_back({p, static_cast<Clk>(rng.below(3))});
    }
    Clk horizon = 14;
    AuditReport lib = validate_path_set(ids, paths, ws, horizon);
    CHECK(violation_keys(lib) == audit_oracle(ids, paths, ws, horizon));
  }
}

TEST_CASE("trace: write/read round trip preserves every sample") {
  Trace t;
  t.kind = RobotKind::DifferentialDrive;
  t.horizon = 4;
  Path p;
  p.states = {at(1, 1, Heading::East), at(2, 1, Heading::East),
              at(2, 1, Heading::North), at(2, 2, Heading::North)};
  t.robots[1] = {p, 0};
  t.robots[2] = {Path::singleton(at(3, 3, Heading::West)), 0};

  std::string text = trace_to_string(t);
  std::istringstream in(text);
  Trace back = read_trace(in);

  CHECK(back.kind == t.kind);
  CHECK(back.horizon == t.horizon);
  REQUIRE(back.robots.size() == 2);
  for (Clk clk = 0; clk <= t.horizon; ++clk) {
    CHECK(back.robots.at(1).state_at(clk) == t.robots.at(1).state_at(clk));
    CHECK(back.robots.at(2).state_at(clk) == t.robots.at(2).state_at(clk));
  }
  CHECK(trace_to_string(back) == text);
}

TEST_CASE("trace: malformed inputs are rejected") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_trace(in);
  };
  CHECK_THROWS_AS(parse(""), Error);
  CHECK_THROWS_AS(parse("clk,robot,x,y\n"), Error);
  CHECK_THROWS_AS(parse("clk,robot_id,x,y\n0,1,2\n"), Error);
  // A robot teleporting between consecutive clock values.
  CHECK_THROWS_AS(parse("clk,robot_id,x,y\n0,1,1,1\n1,1,3,1\n"), Error);
}
