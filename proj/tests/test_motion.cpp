#include <doctest.h>

#include "covplan/motion.hpp"
#include "covplan/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace covplan;
using namespace covplan::test;

TEST_CASE("apply_motion: turn right is 90 degrees clockwise") {
  RobotState s = at(2, 2, Heading::East);
  RobotState r = apply_motion(RobotKind::DifferentialDrive, s,
                              Motion::TurnRight, 5, 5);
  CHECK(r.cell == Cell{2, 2});
  CHECK(r.heading == Heading::South);
}

TEST_CASE("apply_motion: halt is the identity for every state") {
  for (int h = 0; h < 4; ++h) {
    RobotState s = at(3, 4, static_cast<Heading>(h));
    CHECK(apply_motion(RobotKind::DifferentialDrive, s, Motion::Halt, 5, 5) ==
          s);
  }
  RobotState s = at(1, 1);
  CHECK(apply_motion(RobotKind::Holonomic, s, Motion::Halt, 5, 5) == s);
}

TEST_CASE("apply_motion: move forward follows the heading, north is +y") {
  RobotState s = at(2, 2, Heading::North);
  RobotState r = apply_motion(RobotKind::DifferentialDrive, s,
                              Motion::MoveForward, 5, 5);
  CHECK(r == at(2, 3, Heading::North));

  CHECK(apply_motion(RobotKind::Holonomic, at(2, 2), Motion::MoveEast, 5, 5) ==
        at(3, 2));
  CHECK(apply_motion(RobotKind::Holonomic, at(2, 2), Motion::MoveSouth, 5,
                     5) == at(2, 1));
}

TEST_CASE("apply_motion: rejects illegal primitives and leaving the grid") {
  CHECK_THROWS_AS(apply_motion(RobotKind::Holonomic, at(1, 1),
                               Motion::TurnLeft, 5, 5),
                  Error);
  CHECK_THROWS_AS(apply_motion(RobotKind::DifferentialDrive,
                               at(1, 1, Heading::East), Motion::MoveEast, 5,
                               5),
                  Error);
  CHECK_THROWS_AS(apply_motion(RobotKind::Holonomic, at(5, 5),
                               Motion::MoveEast, 5, 5),
                  Error);
  CHECK_THROWS_AS(apply_motion(RobotKind::DifferentialDrive,
                               at(1, 1, Heading::West), Motion::MoveForward,
                               5, 5),
                  Error);
}

TEST_CASE("turn algebra: TL then TR is identity, four TRs are identity") {
  for (int h = 0; h < 4; ++h) {
    RobotState s = at(2, 2, static_cast<Heading>(h));
    RobotState tltr = apply_motion(
        RobotKind::DifferentialDrive,
        apply_motion(RobotKind::DifferentialDrive, s, Motion::TurnLeft, 5, 5),
        Motion::TurnRight, 5, 5);
    CHECK(tltr == s);

    RobotState four = s;
    for (int i = 0; i < 4; ++i)
      four = apply_motion(RobotKind::DifferentialDrive, four,
                          Motion::TurnRight, 5, 5);
    CHECK(four == s);
  }
}

TEST_CASE("infer_motion: inverse of apply_motion") {
  SplitMix64 rng(5);
  for (RobotKind kind :
       {RobotKind::Holonomic, RobotKind::DifferentialDrive}) {
    Path p = random_path(rng, kind, at(4, 4, Heading::North), 8, 8, 40);
    for (std::size_t j = 1; j < p.states.size(); ++j) {
      auto m = infer_motion(kind, p.states[j - 1], p.states[j]);
      REQUIRE(m.has_value());
      CHECK(apply_motion(kind, p.states[j - 1], *m, 8, 8) == p.states[j]);
    }
  }
  // Non-adjacent states have no single primitive.
  CHECK(!infer_motion(RobotKind::Holonomic, at(1, 1), at(3, 1)).has_value());
  CHECK(!infer_motion(RobotKind::DifferentialDrive, at(1, 1, Heading::East),
                      at(2, 1, Heading::North))
             .has_value());
}

TEST_CASE("path_cost: counts non-halt moves only") {
  CHECK(path_cost(Path::singleton(at(1, 1))) == 0);

  // MN, H, H, MN from (2,2) facing north: cost 2 of 4 moves total.
  Path p;
  p.states = {at(2, 2, Heading::North), at(2, 3, Heading::North),
              at(2, 3, Heading::North), at(2, 3, Heading::North),
              at(2, 4, Heading::North)};
  validate_path(RobotKind::DifferentialDrive, p, 5, 5);
  CHECK(path_cost(p) == 2);
  CHECK(p.length() == 4);
}

TEST_CASE("path_cost: cost plus halt count equals length, on random paths") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    RobotKind kind = trial % 2 == 0 ? RobotKind::Holonomic
                                    : RobotKind::DifferentialDrive;
    // Holonomic states pin the heading; only the diffdrive seed may turn.
    RobotState from =
        kind == RobotKind::Holonomic ? at(4, 4) : at(4, 4, Heading::West);
    Path p =
        random_path(rng, kind, from, 8, 8, static_cast<int>(rng.below(25)));
    int halts = 0;
    for (std::size_t j = 1; j < p.states.size(); ++j)
      if (p.states[j] == p.states[j - 1]) ++halts;
    CHECK(path_cost(p) + halts == p.length());
    validate_path(kind, p, 8, 8);
  }
}

TEST_CASE("validate_path: rejects jumps, empty paths, illegal turns") {
  CHECK_THROWS_AS(validate_path(RobotKind::Holonomic, Path{}, 5, 5), Error);

  Path jump = cells_path({{1, 1}, {3, 1}});
  CHECK_THROWS_AS(validate_path(RobotKind::Holonomic, jump, 5, 5), Error);

  Path diag = cells_path({{1, 1}, {2, 2}});
  CHECK_THROWS_AS(validate_path(RobotKind::Holonomic, diag, 5, 5), Error);

  // A holonomic path may not change heading.
  Path turn;
  turn.states = {at(1, 1, Heading::East), at(1, 1, Heading::North)};
  CHECK_THROWS_AS(validate_path(RobotKind::Holonomic, turn, 5, 5), Error);
}

TEST_CASE("timed path: occupancy before, during, and after the span") {
  TimedPath tp{cells_path({{1, 1}, {2, 1}, {3, 1}}), 5};
  CHECK(tp.t_stop() == 7);
  CHECK(tp.state_at(0).cell == Cell{1, 1});
  CHECK(tp.state_at(5).cell == Cell{1, 1});
  CHECK(tp.state_at(6).cell == Cell{2, 1});
  CHECK(tp.state_at(7).cell == Cell{3, 1});
  CHECK(tp.state_at(100).cell == Cell{3, 1});
}

TEST_CASE("heading letters round-trip") {
  for (int h = 0; h < 4; ++h) {
    Heading hd = static_cast<Heading>(h);
    auto back = heading_from_letter(heading_letter(hd));
    REQUIRE(back.has_value());
    CHECK(*back == hd);
  }
  CHECK(!heading_from_letter('x').has_value());
}
