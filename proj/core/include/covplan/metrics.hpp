// Mission metrics: time decomposition and interval classification.
//
// All computations are pure functions over the round log (planning spans
// in milliseconds) and the dispatched paths (following spans in clock
// intervals), so they can be evaluated identically for live missions and
// for post-hoc analysis of recorded artifacts.
#pragma once

#include <cstdint>
#include <vector>

#include "covplan/types.hpp"

namespace covplan {

// Half-open span of milliseconds [begin, end).
struct MsSpan {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

// Half-open span of clock intervals [begin, end) during which some robot
// is executing a dispatched path (Halt steps included).
struct ClkSpan {
  Clk begin = 0;
  Clk end = 0;
};

// Per-interval classification up to the final clock value: planning and
// following (pf), following only (f), planning only (p), neither (idle).
struct IntervalClasses {
  long long pf = 0;
  long long f = 0;
  long long p = 0;
  long long idle = 0;

  long long active_total() const { return pf + f + p; }
  friend bool operator==(const IntervalClasses&,
                         const IntervalClasses&) = default;
};

// Classifies every interval t in [0, lambda): planning is active iff some
// planning span intersects [t*tau, (t+1)*tau); following is active iff
// some following span contains t.
IntervalClasses classify_intervals(const std::vector<MsSpan>& planning,
                                   const std::vector<ClkSpan>& following,
                                   Clk lambda, std::int64_t tau_ms);

// Total milliseconds of planning time lying inside intervals where
// following is also active (the overlapped portion of computation).
std::int64_t overlapped_computation_ms(const std::vector<MsSpan>& planning,
                                       const std::vector<ClkSpan>& following,
                                       std::int64_t tau_ms);

// Number of distinct intervals covered by at least one following span.
long long following_interval_count(const std::vector<ClkSpan>& following);

}  // namespace covplan
