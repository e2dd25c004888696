// Micro-benchmarks for the planning hot paths and one full mission.
#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "covplan/conflict_resolution.hpp"
#include "covplan/mission.hpp"
#include "covplan/optimal_paths.hpp"
#include "covplan/rng.hpp"

namespace {

using namespace covplan;

Path straight_path(Cell from, Cell to) {
  std::vector<RobotState> states{{from, Heading::East}};
  Cell cur = from;
  while (cur.x != to.x) {
    cur.x += to.x > cur.x ? 1 : -1;
    states.push_back({cur, Heading::East});
  }
  while (cur.y != to.y) {
    cur.y += to.y > cur.y ? 1 : -1;
    states.push_back({cur, Heading::East});
  }
  return Path(std::move(states));
}

GridView explored_all_goals(const Workspace& ws) {
  GridView v(ws.width(), ws.height());
  for (int y = 1; y <= ws.height(); ++y)
    for (int x = 1; x <= ws.width(); ++x) {
      const Cell c{x, y};
      v.set(c, ws.obstacle(c) ? CellClass::Obstacle : CellClass::Goal);
    }
  return v;
}

void BM_CostMatrix32(benchmark::State& state) {
  SplitMix64 rng(9);
  const Workspace ws = Workspace::random(32, 32, 0.2675, rng);
  const GridView view = explored_all_goals(ws);
  const std::vector<Cell> free = ws.free_cells();
  std::vector<RobotId> ids;
  std::vector<RobotState> states;
  for (int i = 0; i < 8; ++i) {
    ids.push_back(i + 1);
    states.push_back({free[static_cast<std::size_t>(i)], Heading::East});
  }
  for (auto _ : state) {
    CostMatrix m =
        compute_optimal_costs(view, {}, ids, states, RobotKind::Holonomic);
    benchmark::DoNotOptimize(m.cost.data());
  }
}
BENCHMARK(BM_CostMatrix32);

void BM_Assignment8x64(benchmark::State& state) {
  SplitMix64 rng(17);
  CostMatrix m;
  for (int i = 0; i < 8; ++i) m.participants.push_back(i + 1);
  for (int j = 0; j < 64; ++j) m.goals.push_back({j + 1, 1});
  m.cost.resize(8 * 64);
  for (auto& entry : m.cost)
    if (rng.below(6) != 0) entry = static_cast<int>(rng.below(60));
  for (auto _ : state) {
    Assignment a = assign_optimal(m);
    benchmark::DoNotOptimize(a.total_cost);
  }
}
BENCHMARK(BM_Assignment8x64);

void BM_ConflictFixpoint8(benchmark::State& state) {
  std::vector<ConflictRobot> robots;
  std::vector<Cell> starts;
  for (int i = 0; i < 8; ++i) {
    ConflictRobot r;
    r.id = i + 1;
    r.participant = true;
    r.active = true;
    const Cell start{1 + i, 1 + i};
    const Cell goal{16 - i, 9 + (i % 4)};
    starts.push_back(start);
    r.path = straight_path(start, goal);
    r.goal = goal;
    robots.push_back(std::move(r));
  }
  PathExtractor extract = [&starts](int index, Cell goal) {
    return straight_path(starts[static_cast<std::size_t>(index)], goal);
  };
  for (auto _ : state) {
    ResolutionResult res = resolve_conflicts(robots, extract);
    benchmark::DoNotOptimize(res.iterations);
  }
}
BENCHMARK(BM_ConflictFixpoint8);

void BM_Mission16x16R4(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.width = cfg.height = 16;
  cfg.robots = 4;
  cfg.density = 0.2675;
  cfg.seed = 3;
  const Workspace truth = make_workspace(cfg);
  for (auto _ : state) {
    MissionReport rep = run_mission_virtual(cfg, truth);
    benchmark::DoNotOptimize(rep.covered);
  }
}
BENCHMARK(BM_Mission16x16R4);

}  // namespace

BENCHMARK_MAIN();
