// Internal: report assembly shared by the two mission backends.
#pragma once

#include <cstdint>
#include <vector>

#include "covplan/mission.hpp"

namespace covplan::detail {

// Running tallies both backends collect while dispatching.
struct MissionLedger {
  std::vector<ClkSpan> following;
  std::vector<MsSpan> planning;
  std::int64_t t_non_halt_ms = 0;
  std::int64_t t_halt_ms = 0;

  void account_dispatch(const Dispatch& d, std::int64_t tau_ms) {
    following.push_back({d.t_start, d.t_start + d.path.length()});
    for (int j = 0; j < d.path.length(); ++j) {
      const bool halt = d.path.states[static_cast<std::size_t>(j) + 1] ==
                        d.path.states[static_cast<std::size_t>(j)];
      (halt ? t_halt_ms : t_non_halt_ms) += tau_ms;
    }
  }
};

// Builds the full report from the coordinator's final state. When
// `planning_outside_time` is set (the synchronous baseline under virtual
// time), computation consumed no mission time: it is added onto the
// mission makespan and excluded from the overlap metrics.
MissionReport assemble_report(const ScenarioConfig& config,
                              const Workspace& truth,
                              const Coordinator& coord,
                              const MissionLedger& ledger, StopReason reason,
                              std::int64_t stop_ms,
                              bool planning_outside_time);

}  // namespace covplan::detail
