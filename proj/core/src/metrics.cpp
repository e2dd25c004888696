#include "covplan/metrics.hpp"

#include <algorithm>

namespace covplan {

namespace {

bool following_at(const std::vector<ClkSpan>& following, Clk t) {
  for (const ClkSpan& s : following)
    if (s.begin <= t && t < s.end) return true;
  return false;
}

bool planning_at(const std::vector<MsSpan>& planning, std::int64_t lo,
                 std::int64_t hi) {
  for (const MsSpan& s : planning)
    if (s.end > s.begin && s.begin < hi && s.end > lo) return true;
  return false;
}

}  // namespace

IntervalClasses classify_intervals(const std::vector<MsSpan>& planning,
                                   const std::vector<ClkSpan>& following,
                                   Clk lambda, std::int64_t tau_ms) {
  IntervalClasses out;
  for (Clk t = 0; t < lambda; ++t) {
    const bool p = planning_at(planning, t * tau_ms, (t + 1) * tau_ms);
    const bool f = following_at(following, t);
    if (p && f)
      ++out.pf;
    else if (f)
      ++out.f;
    else if (p)
      ++out.p;
    else
      ++out.idle;
  }
  return out;
}

std::int64_t overlapped_computation_ms(const std::vector<MsSpan>& planning,
                                       const std::vector<ClkSpan>& following,
                                       std::int64_t tau_ms) {
  std::int64_t total = 0;
  for (const MsSpan& span : planning) {
    if (span.end <= span.begin) continue;
    for (Clk t = span.begin / tau_ms; t * tau_ms < span.end; ++t) {
      if (!following_at(following, t)) continue;
      total += std::min<std::int64_t>(span.end, (t + 1) * tau_ms) -
               std::max<std::int64_t>(span.begin, t * tau_ms);
    }
  }
  return total;
}

long long following_interval_count(const std::vector<ClkSpan>& following) {
  std::vector<ClkSpan> spans;
  for (const ClkSpan& s : following)
    if (s.end > s.begin) spans.push_back(s);
  std::sort(spans.begin(), spans.end(), [](const ClkSpan& a, const ClkSpan& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  long long total = 0;
  Clk covered_to = 0;
  bool any = false;
  for (const ClkSpan& s : spans) {
    if (!any || s.begin > covered_to) {
      total += s.end - s.begin;
      covered_to = s.end;
      any = true;
    } else if (s.end > covered_to) {
      total += s.end - covered_to;
      covered_to = s.end;
    }
  }
  return total;
}

}  // namespace covplan
