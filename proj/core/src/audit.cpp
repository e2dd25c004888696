#include "covplan/audit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace covplan {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::ObstacleHit: return "obstacle-hit";
    case ViolationKind::SameCell: return "same-cell";
    case ViolationKind::HeadOnSwap: return "head-on-swap";
  }
  return "?";
}

std::string Violation::describe() const {
  std::string out = std::string(to_string(kind)) + " at interval " +
                    std::to_string(t) + ": robot " + std::to_string(a);
  if (kind == ViolationKind::ObstacleHit)
    out += " occupies obstacle cell " + to_string(where);
  else if (kind == ViolationKind::SameCell)
    out += " and robot " + std::to_string(b) + " both occupy " +
           to_string(where);
  else
    out += " and robot " + std::to_string(b) + " swap cells through " +
           to_string(where);
  return out;
}

std::string AuditReport::describe() const {
  if (clean()) return "audit clean\n";
  std::string out;
  for (const Violation& v : violations) {
    out += v.describe();
    out += '\n';
  }
  return out;
}

AuditReport validate_path_set(const std::vector<RobotId>& ids,
                              const std::vector<TimedPath>& paths,
                              const Workspace& truth, Clk horizon) {
  require(ids.size() == paths.size(), "audit: ids and paths differ in size");
  AuditReport report;
  const int n = static_cast<int>(ids.size());
  if (n == 0) return report;

  if (horizon < 0)
    for (const TimedPath& p : paths) horizon = std::max(horizon, p.t_stop());
  if (horizon < 0) horizon = 0;

  std::vector<Cell> prev(static_cast<std::size_t>(n));
  std::vector<Cell> cur(static_cast<std::size_t>(n));
  for (Clk t = 0; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i)
      cur[static_cast<std::size_t>(i)] =
          paths[static_cast<std::size_t>(i)].state_at(t).cell;

    for (int i = 0; i < n; ++i) {
      Cell c = cur[static_cast<std::size_t>(i)];
      if (!truth.in_bounds(c) || truth.obstacle(c))
        report.violations.push_back({ViolationKind::ObstacleHit, t,
                                     ids[static_cast<std::size_t>(i)], 0, c});
    }
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) {
        Cell ci = cur[static_cast<std::size_t>(i)];
        Cell ck = cur[static_cast<std::size_t>(k)];
        if (ci == ck)
          report.violations.push_back({ViolationKind::SameCell, t,
                                       ids[static_cast<std::size_t>(i)],
                                       ids[static_cast<std::size_t>(k)], ci});
        if (t > 0 && ci == prev[static_cast<std::size_t>(k)] &&
            ck == prev[static_cast<std::size_t>(i)] && ci != ck)
          report.violations.push_back({ViolationKind::HeadOnSwap, t,
                                       ids[static_cast<std::size_t>(i)],
                                       ids[static_cast<std::size_t>(k)], ci});
      }
    std::swap(prev, cur);
  }
  return report;
}

void write_trace(std::ostream& out, const Trace& trace) {
  const bool heading = trace.kind == RobotKind::DifferentialDrive;
  out << (heading ? "clk,robot_id,x,y,heading" : "clk,robot_id,x,y") << '\n';
  for (Clk t = 0; t <= trace.horizon; ++t)
    for (const auto& [id, path] : trace.robots) {
      const RobotState& s = path.state_at(t);
      out << t << ',' << id << ',' << s.cell.x << ',' << s.cell.y;
      if (heading) out << ',' << heading_letter(s.heading);
      out << '\n';
    }
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Trace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Trace trace;
  bool heading = false;
  if (line == "clk,robot_id,x,y,heading") {
    heading = true;
    trace.kind = RobotKind::DifferentialDrive;
  } else if (line == "clk,robot_id,x,y") {
    trace.kind = RobotKind::Holonomic;
  } else {
    throw ConfigError("trace: unrecognized header: " + line);
  }

  std::map<RobotId, std::map<Clk, RobotState>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    auto next_field = [&]() {
      if (!std::getline(ss, field, ','))
        throw ConfigError("trace: short row at line " +
                          std::to_string(line_no));
      return field;
    };
    try {
      Clk t = std::stoll(next_field());
      RobotId id = std::stoi(next_field());
      int x = std::stoi(next_field());
      int y = std::stoi(next_field());
      RobotState s{{x, y}};
      if (heading) {
        std::string h = next_field();
        auto hd = h.size() == 1 ? heading_from_letter(h[0]) : std::nullopt;
        if (!hd)
          throw ConfigError("trace: bad heading at line " +
                            std::to_string(line_no));
        s.heading = *hd;
      }
      if (t < 0)
        throw ConfigError("trace: negative clk at line " +
                          std::to_string(line_no));
      if (!rows[id].emplace(t, s).second)
        throw ConfigError("trace: duplicate (clk, robot) at line " +
                          std::to_string(line_no));
      trace.horizon = std::max(trace.horizon, t);
    } catch (const std::invalid_argument&) {
      throw ConfigError("trace: malformed number at line " +
                        std::to_string(line_no));
    } catch (const std::out_of_range&) {
      throw ConfigError("trace: number out of range at line " +
                        std::to_string(line_no));
    }
  }
  if (rows.empty()) throw ConfigError("trace: no data rows");

  for (auto& [id, by_clk] : rows) {
    Path p;
    for (Clk t = 0; t <= trace.horizon; ++t) {
      auto it = by_clk.find(t);
      if (it == by_clk.end())
        throw ConfigError("trace: robot " + std::to_string(id) +
                          " has no row for clk " + std::to_string(t));
      p.states.push_back(it->second);
    }
    for (std::size_t j = 1; j < p.states.size(); ++j)
      if (!infer_motion(trace.kind, p.states[j - 1], p.states[j]))
        throw ConfigError("trace: robot " + std::to_string(id) +
                          " makes an illegal move into clk " +
                          std::to_string(j));
    trace.robots.emplace(id, TimedPath{std::move(p), 0});
  }
  return trace;
}

}  // namespace covplan
