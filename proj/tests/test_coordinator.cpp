#include <doctest.h>

#include "covplan/coordinator.hpp"
#include "test_support.hpp"

using namespace covplan;
using namespace covplan::test;

namespace {

// Hand-built round result: every listed robot active on its path, the
// rest of the participants inactive on their singteton states.
RoundResult round_result(Clk t_start,
                         const std::vector<std::pair<RobotId, Path>>& active,
                         const std::vector<std::pair<RobotId, RobotState>>&
                             inactive = {}) {
  RoundResult res;
  res.t_start = t_start;
  for (const auto& [id, path] : active) {
    res.scheduled[id] = path;
    res.active[id] = true;
    res.offsets[id] = 0;
    res.actives.push_back(id);
  }
  for (const auto& [id, state] : inactive) {
    res.scheduled[id] = Path::singleton(state);
    res.active[id] = false;
    res.offsets[id] = 0;
  }
  res.matched = static_cast<int>(active.size());
  res.attempts.push_back({1, t_start, 0, 0, true});
  return res;
}

}  // namespace

TEST_CASE("append_full_path: dummy-path arithmetic") {
  // Stop time 2, next segment at 5: exactly two rest states in between.
  Path full = cells_path({{1, 1}, {2, 1}, {3, 1}});
  Path seg = cells_path({{3, 1}, {3, 2}});
  append_full_path(full, seg, 5);
  CHECK(full.length() == 6);
  CHECK(full.states[2].cell == Cell{3, 1});
  CHECK(full.states[3].cell == Cell{3, 1});  // zeta state 1
  CHECK(full.states[4].cell == Cell{3, 1});  // zeta state 2
  CHECK(full.states[5].cell == Cell{3, 1});  // segment start at T_start
  CHECK(full.states[6].cell == Cell{3, 2});
}

TEST_CASE("append_full_path: synchronous boundary skips the duplicate") {
  Path full = cells_path({{1, 1}, {2, 1}});
  Path seg = cells_path({{2, 1}, {3, 1}});
  append_full_path(full, seg, 1);  // t_start == current stop time
  CHECK(full.length() == 2);
  CHECK(full.states[1].cell == Cell{2, 1});
  CHECK(full.states[2].cell == Cell{3, 1});
}

TEST_CASE("append_full_path: rejects gaps and discontinuities") {
  Path full = cells_path({{1, 1}, {2, 1}});
  Path wrong = cells_path({{4, 4}, {5, 4}});
  CHECK_THROWS_AS(append_full_path(full, wrong, 3), Error);

  Path full2 = cells_path({{1, 1}, {2, 1}});
  Path seg = cells_path({{2, 1}, {3, 1}});
  CHECK_THROWS_AS(append_full_path(full2, seg, 0), Error);
}

TEST_CASE("round log: exact CSV shape") {
  CHECK(RoundLogRecord::csv_header() ==
        "round_id,clk_begin,clk_end,t_wall_ms,R*,n_active,n_inactive,"
        "T_start,retries");
  RoundLogRecord rec{1, 0, 0, 0, 3, 3, 0, 1, 0};
  CHECK(rec.csv_row() == "1,0,0,0,3,3,0,1,0");
}

TEST_CASE("coordinator: request protocol errors") {
  Workspace ws(3, 1);
  Coordinator coord(2, 3, 1);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(3, 1));
  CHECK_THROWS_AS(coord.register_robot(1, at(1, 1)), Error);

  RequestMsg req{1, at(1, 1), init_local_view(ws, {1, 1})};
  CoordinatorOutcome o = coord.receive_local_view(req, 0);
  CHECK(o.decision == Decision::Wait);  // eta starts at the team size

  // Double request while already a participant.
  CHECK_THROWS_AS(coord.receive_local_view(req, 0), ProtocolError);

  // State off the committed path.
  RequestMsg bad{2, at(2, 1), init_local_view(ws, {3, 1})};
  CHECK_THROWS_AS(coord.receive_local_view(bad, 0), ConsistencyError);
}

TEST_CASE("golden: skip-planning scenario") {
  // Three robots on a fully free 3x2 workspace, bottom row starts.
  Workspace ws(3, 2);
  Coordinator coord(3, 3, 2);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(2, 1));
  coord.register_robot(3, at(3, 1));

  // All three request at CLK 0; the round starts with the full team.
  CHECK(coord
            .receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0)
            .decision == Decision::Wait);
  CHECK(coord
            .receive_local_view({2, at(2, 1), init_local_view(ws, {2, 1})}, 0)
            .decision == Decision::Wait);
  CoordinatorOutcome third =
      coord.receive_local_view({3, at(3, 1), init_local_view(ws, {3, 1})}, 0);
  REQUIRE(third.decision == Decision::Start);
  REQUIRE(third.start.has_value());
  const RoundStartInfo& info = *third.start;
  CHECK(info.participants == std::vector<RobotId>{1, 2, 3});
  CHECK(info.reserved.empty());
  CHECK(coord.round_in_flight());
  CHECK(coord.eta() == 0);
  CHECK(coord.rounds_started() == 1);

  // The round yields paths of lengths 3, 1 and 2, timestamped 1.
  Path p1 = cells_path({{1, 1}, {2, 1}, {1, 1}, {1, 2}});
  Path p2 = cells_path({{2, 1}, {2, 2}});
  Path p3;
  p3.states = {at(3, 1), at(3, 1), at(3, 2)};  // halt, then move north
  RoundCompletion done = coord.complete_round(
      info, round_result(1, {{1, p1}, {2, p2}, {3, p3}}), 0);

  REQUIRE(done.dispatches.size() == 3);
  for (const Dispatch& d : done.dispatches) CHECK(d.t_start == 1);
  CHECK(coord.stop_time(1) == 4);
  CHECK(coord.stop_time(2) == 2);
  CHECK(coord.stop_time(3) == 3);
  CHECK(done.log.csv_row() == "1,0,0,0,3,3,0,1,0");

  // Eta rises to 1: the next finisher (robot 2, at CLK 2) must request
  // before planning can resume.
  CHECK(coord.eta() == 1);
  CHECK(done.next.decision == Decision::Wait);
  CHECK(!coord.round_in_flight());

  // Robot 2 finishes at CLK 2 and requests; every known goal is reserved
  // by the two robots still driving, so the round is skipped and eta
  // grows to 2 (robot 3 arrives at CLK 3).
  GridView v2 = init_local_view(ws, {2, 1});
  sense_and_update(v2, ws, {2, 2});
  CoordinatorOutcome skip = coord.receive_local_view({2, at(2, 2), v2}, 2);
  CHECK(skip.decision == Decision::Skip);
  CHECK(coord.reserved_goals() == std::vector<Cell>{{1, 2}, {3, 2}});
  CHECK(coord.eta() == 2);

  // Robot 3 finishes at CLK 3: only robot 1's goal stays reserved; still
  // nothing to assign, so it is another skip and eta covers robot 1.
  GridView v3 = init_local_view(ws, {3, 1});
  sense_and_update(v3, ws, {3, 1});
  sense_and_update(v3, ws, {3, 2});
  CoordinatorOutcome skip2 = coord.receive_local_view({3, at(3, 2), v3}, 3);
  CHECK(skip2.decision == Decision::Skip);
  CHECK(coord.reserved_goals() == std::vector<Cell>{{1, 2}});
  CHECK(coord.eta() == 3);

  // Robot 1 arrives at CLK 4 having covered the last goal: full stop.
  GridView v1 = init_local_view(ws, {1, 1});
  sense_and_update(v1, ws, {2, 1});
  sense_and_update(v1, ws, {1, 1});
  sense_and_update(v1, ws, {1, 2});
  CoordinatorOutcome stop = coord.receive_local_view({1, at(1, 2), v1}, 4);
  REQUIRE(stop.decision == Decision::Stop);
  REQUIRE(stop.stop_reason.has_value());
  CHECK(*stop.stop_reason == StopReason::CoverageComplete);
  CHECK(coord.global_view().count(CellClass::Covered) == 6);
  CHECK(coord.rounds_started() == 1);
}

TEST_CASE("eta: two finishers sharing T_min raise eta by two") {
  Workspace ws(3, 2);
  Coordinator coord(3, 3, 2);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(2, 1));
  coord.register_robot(3, at(3, 1));
  coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  coord.receive_local_view({2, at(2, 1), init_local_view(ws, {2, 1})}, 0);
  CoordinatorOutcome start =
      coord.receive_local_view({3, at(3, 1), init_local_view(ws, {3, 1})}, 0);
  REQUIRE(start.decision == Decision::Start);

  Path p1 = cells_path({{1, 1}, {1, 2}});
  Path p2 = cells_path({{2, 1}, {2, 2}});
  Path p3;
  p3.states = {at(3, 1), at(3, 1), at(3, 2)};
  coord.complete_round(*start.start,
                       round_result(1, {{1, p1}, {2, p2}, {3, p3}}), 0);
  // T_stop = {2, 2, 3}: robots 1 and 2 tie at T_min = 2.
  CHECK(coord.eta() == 2);
}

TEST_CASE("coordinator: inactive participants re-enter the next round") {
  Workspace ws(4, 1);
  Coordinator coord(2, 4, 1);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(2, 1));
  coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  CoordinatorOutcome start =
      coord.receive_local_view({2, at(2, 1), init_local_view(ws, {2, 1})}, 0);
  REQUIRE(start.decision == Decision::Start);

  // Robot 2 drives to the only known goal; robot 1 is left inactive.
  Path p2 = cells_path({{2, 1}, {3, 1}});
  RoundCompletion done = coord.complete_round(
      *start.start, round_result(1, {{2, p2}}, {{1, at(1, 1)}}), 0);
  REQUIRE(done.dispatches.size() == 1);
  CHECK(done.dispatches[0].id == 2);
  CHECK(coord.stop_time(1) == 0);  // unchanged: no path dispatched

  // Robot 1 was re-enqueued: a fresh request from it is a double request.
  CHECK_THROWS_AS(coord.receive_local_view(
                      {1, at(1, 1), init_local_view(ws, {1, 1})}, 0),
                  ProtocolError);

  // Eta counts the re-enqueued robot plus the next finisher.
  CHECK(coord.eta() == 2);
  CHECK(done.next.decision == Decision::Skip);
}

TEST_CASE("coordinator: mid-round requests wait and join the next round") {
  Workspace ws(5, 1);
  Coordinator coord(2, 5, 1);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(2, 1));
  coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  CoordinatorOutcome start1 =
      coord.receive_local_view({2, at(2, 1), init_local_view(ws, {2, 1})}, 0);
  REQUIRE(start1.decision == Decision::Start);

  // Round 1: robot 2 takes the goal next door; robot 1 gets a long path
  // that parks it on (2,1) until CLK 5.
  Path p1;
  p1.states = {at(1, 1), at(2, 1), at(2, 1), at(2, 1), at(2, 1)};
  Path p2 = cells_path({{2, 1}, {3, 1}});
  coord.complete_round(*start1.start, round_result(1, {{1, p1}, {2, p2}}), 0);
  CHECK(coord.eta() == 1);  // robot 2 finishes first, at CLK 2

  // Robot 2 requests at CLK 2 and starts round 2 alone.
  GridView v2 = init_local_view(ws, {2, 1});
  sense_and_update(v2, ws, {3, 1});
  CoordinatorOutcome start2 = coord.receive_local_view({2, at(3, 1), v2}, 2);
  REQUIRE(start2.decision == Decision::Start);
  CHECK(start2.start->participants == std::vector<RobotId>{2});
  CHECK(start2.start->non_participants == std::vector<RobotId>{1});

  // Robot 1 finishes while round 2 is still in flight: it must wait, and
  // its view lands in the next round's intake.
  GridView v1 = init_local_view(ws, {1, 1});
  sense_and_update(v1, ws, {2, 1});
  CoordinatorOutcome mid = coord.receive_local_view({1, at(2, 1), v1}, 5);
  CHECK(mid.decision == Decision::Wait);
  CHECK(coord.round_in_flight());

  // Round 2 completes at CLK 5. Robot 2 is already done driving by then,
  // so raising eta finds nobody to wait for: a benign warning no-op.
  Path p2b = cells_path({{3, 1}, {4, 1}});
  RoundCompletion done2 =
      coord.complete_round(*start2.start, round_result(3, {{2, p2b}}), 5);
  CHECK(done2.next.decision == Decision::Skip);
  CHECK(coord.eta_warnings() == 1);

  // Robot 1 is a queued participant now; double requests still rejected.
  CHECK_THROWS_AS(coord.receive_local_view({1, at(2, 1), v1}, 5),
                  ProtocolError);
}

TEST_CASE("coordinator: stalled stop when goals exist but nobody can move") {
  Workspace ws(2, 2);
  Coordinator coord(1, 2, 2);
  coord.register_robot(1, at(1, 1));
  CoordinatorOutcome start =
      coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  REQUIRE(start.decision == Decision::Start);

  // The planner comes back empty-handed: the sole participant inactive.
  RoundCompletion done = coord.complete_round(
      *start.start, round_result(1, {}, {{1, at(1, 1)}}), 0);
  REQUIRE(done.next.decision == Decision::Stop);
  REQUIRE(done.next.stop_reason.has_value());
  CHECK(*done.next.stop_reason == StopReason::Stalled);
}

TEST_CASE("coordinator: fruitless partial round widens instead of stalling") {
  // Round 2 fields only robot 1 and yields nothing, but robot 2 joined
  // while it was in flight: the next round sees a strictly larger team,
  // so stopping would be premature. Only a fruitless round that already
  // had everyone is a dead end.
  Workspace ws(5, 1);
  Coordinator coord(2, 5, 1);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(2, 1));
  coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  CoordinatorOutcome start1 =
      coord.receive_local_view({2, at(2, 1), init_local_view(ws, {2, 1})}, 0);
  REQUIRE(start1.decision == Decision::Start);

  // Round 1: robot 1 takes one step, robot 2 drives two.
  Path p1 = cells_path({{1, 1}, {2, 1}});
  Path p2 = cells_path({{2, 1}, {3, 1}, {4, 1}});
  coord.complete_round(*start1.start, round_result(1, {{1, p1}, {2, p2}}), 0);
  CHECK(coord.eta() == 1);  // robot 1 is the earliest finisher (CLK 2)

  // Robot 1 requests at CLK 2 and rounds 2 starts with it alone.
  GridView v1 = init_local_view(ws, {1, 1});
  sense_and_update(v1, ws, {2, 1});
  CoordinatorOutcome start2 = coord.receive_local_view({1, at(2, 1), v1}, 2);
  REQUIRE(start2.decision == Decision::Start);
  CHECK(start2.start->participants == std::vector<RobotId>{1});
  CHECK(start2.start->non_participants == std::vector<RobotId>{2});

  // Robot 2 finishes and requests while round 2 is in flight.
  GridView v2 = init_local_view(ws, {2, 1});
  sense_and_update(v2, ws, {3, 1});
  sense_and_update(v2, ws, {4, 1});
  CHECK(coord.receive_local_view({2, at(4, 1), v2}, 3).decision ==
        Decision::Wait);

  // Round 2 comes back all-inactive at CLK 4. Goals remain ((5,1) is
  // known), nobody is moving, and the waiting set is the whole team --
  // yet the mission must not stall: round 3 starts with both robots.
  RoundCompletion done = coord.complete_round(
      *start2.start, round_result(3, {}, {{1, at(2, 1)}}), 4);
  REQUIRE(done.next.decision == Decision::Start);
  CHECK(done.next.start->participants == (std::vector<RobotId>{1, 2}));
  CHECK(done.next.start->non_participants.empty());
  CHECK(done.next.start->round_id == 3);
}

TEST_CASE("coordinator: full-team mode pins eta at the team size") {
  Workspace ws(3, 1);
  Coordinator coord(2, 3, 1, EtaMode::FullTeam);
  coord.register_robot(1, at(1, 1));
  coord.register_robot(2, at(3, 1));
  CHECK(coord.eta() == 2);
  coord.receive_local_view({1, at(1, 1), init_local_view(ws, {1, 1})}, 0);
  CoordinatorOutcome start =
      coord.receive_local_view({2, at(3, 1), init_local_view(ws, {3, 1})}, 0);
  REQUIRE(start.decision == Decision::Start);
  Path p1 = cells_path({{1, 1}, {2, 1}});
  RoundCompletion done = coord.complete_round(
      *start.start, round_result(1, {{1, p1}}, {{2, at(3, 1)}}), 0);
  // Eta never moves in full-team mode, even with an inactive re-enqueue.
  CHECK(coord.eta() == 2);
  CHECK(done.next.decision == Decision::Wait);
}
