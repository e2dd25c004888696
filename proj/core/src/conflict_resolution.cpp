#include "covplan/conflict_resolution.hpp"

#include <algorithm>
#include <set>

#include "covplan/optimal_paths.hpp"

namespace covplan {

Path remaining_path(const Path& full, Clk t_start) {
  require(t_start >= 0, "remaining_path: negative t_start");
  if (static_cast<Clk>(full.length()) <= t_start)
    return Path::singleton(full.back());
  Path out;
  out.states.assign(full.states.begin() + static_cast<std::ptrdiff_t>(t_start),
                    full.states.end());
  return out;
}

std::map<RobotId, Path> remaining_paths(
    const std::map<RobotId, Path>& full_paths,
    const std::vector<RobotId>& non_participants, Clk t_start) {
  std::map<RobotId, Path> out;
  for (RobotId id : non_participants)
    out.emplace(id, remaining_path(full_paths.at(id), t_start));
  return out;
}

namespace {

bool contains_cell(const Path& p, Cell c) {
  for (const RobotState& s : p.states)
    if (s.cell == c) return true;
  return false;
}

int first_index_of(const Path& p, Cell c) {
  for (std::size_t j = 0; j < p.states.size(); ++j)
    if (p.states[j].cell == c) return static_cast<int>(j);
  return -1;
}

Cell start_cell(const ConflictRobot& r) { return r.path.front().cell; }
Cell goal_cell(const ConflictRobot& r) { return r.path.back().cell; }

void make_inactive(ConflictRobot& r) {
  r.active = false;
  r.goal.reset();
  r.path = Path::singleton(r.path.front());
}

int repair_cap(std::size_t n) { return static_cast<int>(4 * n * n) + 64; }

}  // namespace

int adjust_crossover_paths(std::vector<ConflictRobot>& robots,
                           const PathExtractor& extract) {
  const int n = static_cast<int>(robots.size());
  int swaps = 0;
  // Each unordered pair may swap at most once per call; a swap that fails
  // to dissolve the pattern must not ping-pong forever.
  std::set<std::pair<RobotId, RobotId>> swapped;

  bool found = true;
  int guard = repair_cap(robots.size());
  while (found) {
    require(guard-- > 0, "crossover repair did not converge");
    found = false;
    for (int i = 0; i < n && !found; ++i) {
      if (!robots[static_cast<std::size_t>(i)].participant) continue;
      for (int j = i + 1; j < n && !found; ++j) {
        if (!robots[static_cast<std::size_t>(j)].participant) continue;
        ConflictRobot& a = robots[static_cast<std::size_t>(i)];
        ConflictRobot& b = robots[static_cast<std::size_t>(j)];
        if (swapped.count({a.id, b.id})) continue;

        if (a.active && b.active) {
          // Two active participants standing on each other's paths.
          if (!contains_cell(b.path, start_cell(a)) ||
              !contains_cell(a.path, start_cell(b)))
            continue;
          Cell ga = *a.goal;
          Cell gb = *b.goal;
          a.goal = gb;
          a.path = extract(i, gb);
          b.goal = ga;
          b.path = extract(j, ga);
        } else if (a.active != b.active) {
          // An inactive participant resting on an active one's path: the
          // rester takes over the goal, the active one stands down.
          ConflictRobot& act = a.active ? a : b;
          ConflictRobot& idle = a.active ? b : a;
          const int idle_index = a.active ? j : i;
          if (!contains_cell(act.path, start_cell(idle))) continue;
          idle.goal = act.goal;
          idle.path = extract(idle_index, *idle.goal);
          idle.active = true;
          make_inactive(act);
        } else {
          continue;
        }
        swapped.insert({a.id, b.id});
        ++swaps;
        found = true;
      }
    }
  }
  return swaps;
}

int adjust_nested_paths(std::vector<ConflictRobot>& robots,
                        const PathExtractor& extract) {
  const int n = static_cast<int>(robots.size());
  std::vector<int> actives;
  for (int i = 0; i < n; ++i)
    if (robots[static_cast<std::size_t>(i)].participant &&
        robots[static_cast<std::size_t>(i)].active)
      actives.push_back(i);
  const int m = static_cast<int>(actives.size());
  if (m < 2) return 0;

  // nested[j][i]: both endpoints of i's path lie on j's path.
  std::vector<std::vector<char>> nested(
      static_cast<std::size_t>(m), std::vector<char>(static_cast<std::size_t>(m), 0));
  bool any = false;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      const Path& outer = robots[static_cast<std::size_t>(actives[static_cast<std::size_t>(j)])].path;
      const ConflictRobot& inner = robots[static_cast<std::size_t>(actives[static_cast<std::size_t>(i)])];
      if (contains_cell(outer, start_cell(inner)) &&
          contains_cell(outer, goal_cell(inner))) {
        nested[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
        any = true;
      }
    }
  if (!any) return 0;

  // Parent of i: the innermost containing path (shortest, ties by id).
  std::vector<int> parent(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!nested[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
        continue;
      if (parent[static_cast<std::size_t>(i)] == -1) {
        parent[static_cast<std::size_t>(i)] = j;
        continue;
      }
      const Path& cur =
          robots[static_cast<std::size_t>(actives[static_cast<std::size_t>(
              parent[static_cast<std::size_t>(i)])])].path;
      const Path& cand = robots[static_cast<std::size_t>(
          actives[static_cast<std::size_t>(j)])].path;
      if (cand.length() < cur.length()) parent[static_cast<std::size_t>(i)] = j;
    }
  }

  // Mutual containment can leave a component without a parentless node;
  // break it deterministically by promoting its lowest robot to a root.
  std::vector<char> in_forest(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    if (parent[static_cast<std::size_t>(i)] != -1)
      in_forest[static_cast<std::size_t>(i)] = 1;
    for (int j = 0; j < m; ++j)
      if (nested[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        in_forest[static_cast<std::size_t>(i)] = 1;
  }
  for (int i = 0; i < m; ++i) {
    if (!in_forest[static_cast<std::size_t>(i)]) continue;
    // Follow parents; a loop means no root exists on this component.
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    int v = i;
    while (parent[static_cast<std::size_t>(v)] != -1 &&
           !seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      v = parent[static_cast<std::size_t>(v)];
    }
    if (parent[static_cast<std::size_t>(v)] != -1 &&
        seen[static_cast<std::size_t>(v)]) {
      // v is on a parent cycle; make its smallest member a root.
      int best = v;
      int w = parent[static_cast<std::size_t>(v)];
      while (w != v) {
        if (actives[static_cast<std::size_t>(w)] <
            actives[static_cast<std::size_t>(best)])
          best = w;
        w = parent[static_cast<std::size_t>(w)];
      }
      parent[static_cast<std::size_t>(best)] = -1;
    }
  }

  // Children ordered by where the child's start sits along the parent.
  std::vector<std::vector<int>> children(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    if (parent[static_cast<std::size_t>(i)] != -1)
      children[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])]
          .push_back(i);
  for (int p = 0; p < m; ++p) {
    const Path& pp =
        robots[static_cast<std::size_t>(actives[static_cast<std::size_t>(p)])]
            .path;
    std::sort(children[static_cast<std::size_t>(p)].begin(),
              children[static_cast<std::size_t>(p)].end(), [&](int x, int y) {
                int px = first_index_of(
                    pp, start_cell(robots[static_cast<std::size_t>(
                            actives[static_cast<std::size_t>(x)])]));
                int py = first_index_of(
                    pp, start_cell(robots[static_cast<std::size_t>(
                            actives[static_cast<std::size_t>(y)])]));
                if (px != py) return px < py;
                return actives[static_cast<std::size_t>(x)] <
                       actives[static_cast<std::size_t>(y)];
              });
  }

  // Pre-order robots take post-order goals, per tree.
  int changed = 0;
  for (int r = 0; r < m; ++r) {
    if (parent[static_cast<std::size_t>(r)] != -1) continue;
    if (children[static_cast<std::size_t>(r)].empty()) continue;

    std::vector<int> pre, post;
    auto dfs = [&](auto&& self, int v) -> void {
      pre.push_back(v);
      for (int c : children[static_cast<std::size_t>(v)]) self(self, c);
      post.push_back(v);
    };
    dfs(dfs, r);

    std::vector<Cell> goals(pre.size());
    for (std::size_t k = 0; k < post.size(); ++k)
      goals[k] = *robots[static_cast<std::size_t>(actives[static_cast<std::size_t>(post[k])])].goal;
    for (std::size_t k = 0; k < pre.size(); ++k) {
      const int ri = actives[static_cast<std::size_t>(pre[k])];
      ConflictRobot& rob = robots[static_cast<std::size_t>(ri)];
      if (*rob.goal == goals[k]) continue;
      rob.goal = goals[k];
      rob.path = extract(ri, goals[k]);
      ++changed;
    }
  }
  return changed;
}

PrecedenceMatrix compute_precedences(const std::vector<ConflictRobot>& robots) {
  const int n = static_cast<int>(robots.size());
  PrecedenceMatrix m;
  m.ids.reserve(robots.size());
  for (const ConflictRobot& r : robots) m.ids.push_back(r.id);
  m.edges.assign(static_cast<std::size_t>(n) * n, 0);

  for (int b = 0; b < n; ++b) {
    const ConflictRobot& rb = robots[static_cast<std::size_t>(b)];
    if (!rb.participant || !rb.active) continue;  // only actives ever yield
    for (int a = 0; a < n; ++a) {
      if (a == b) continue;
      const ConflictRobot& ra = robots[static_cast<std::size_t>(a)];
      // a must depart before b drives over a's start, and a must drive
      // over b's goal before b parks on it.
      if (contains_cell(rb.path, start_cell(ra)) ||
          contains_cell(ra.path, goal_cell(rb)))
        m.edges[static_cast<std::size_t>(a) * n + b] = 1;
    }
  }
  return m;
}

AbsolutePrecedence absolute_precedence(const PrecedenceMatrix& m,
                                       const std::vector<ConflictRobot>& robots) {
  const int n = static_cast<int>(robots.size());
  AbsolutePrecedence out;

  std::vector<int> nodes;  // indices of active participants, id order
  for (int i = 0; i < n; ++i)
    if (robots[static_cast<std::size_t>(i)].participant &&
        robots[static_cast<std::size_t>(i)].active)
      nodes.push_back(i);

  // Edges from committed robots do not order the actives among themselves
  // (the offset search respects them against the committed paths), so the
  // topological sort runs on the active-active subgraph.
  std::map<int, int> indegree;
  for (int v : nodes) indegree[v] = 0;
  for (int a : nodes)
    for (int b : nodes)
      if (a != b && m.at(a, b)) ++indegree[b];

  std::set<int> ready;
  for (int v : nodes)
    if (indegree[v] == 0) ready.insert(v);

  std::set<int> remaining(nodes.begin(), nodes.end());
  while (!ready.empty()) {
    const int v = *ready.begin();  // lowest index = lowest id
    ready.erase(ready.begin());
    remaining.erase(v);
    out.order.push_back(robots[static_cast<std::size_t>(v)].id);
    for (int b : remaining)
      if (m.at(v, b) && --indegree[b] == 0) ready.insert(b);
  }
  if (remaining.empty()) return out;

  // Cycle witness: walk predecessors within the remainder (every node
  // there has one) until a node repeats.
  out.order.clear();
  std::vector<int> path;
  std::set<int> on_path;
  int v = *remaining.begin();
  while (!on_path.count(v)) {
    path.push_back(v);
    on_path.insert(v);
    for (int a : remaining)
      if (a != v && m.at(a, v)) {
        v = a;
        break;
      }
  }
  std::vector<RobotId> cycle;
  for (auto it = std::find(path.begin(), path.end(), v); it != path.end();
       ++it)
    cycle.push_back(robots[static_cast<std::size_t>(*it)].id);
  std::reverse(cycle.begin(), cycle.end());  // follow edge direction
  out.cycle_witness = std::move(cycle);
  return out;
}

RobotId break_precedence_cycles(std::vector<ConflictRobot>& robots,
                                const std::vector<RobotId>& cycle) {
  require(!cycle.empty(), "cycle breaking needs a witness cycle");
  const RobotId victim = *std::min_element(cycle.begin(), cycle.end());
  for (ConflictRobot& r : robots)
    if (r.id == victim) {
      require(r.participant && r.active,
              "cycle victim must be an active participant");
      make_inactive(r);
      return victim;
    }
  throw InvariantError("cycle victim not found among robots");
}

namespace {

// True when `moving`, started after `offset` Halt steps, conflicts with
// the committed path `fixed` (same anchor) under the same-cell or head-on
// condition, both padded with their final states forever.
bool offset_conflicts(const Path& moving, int offset, const Path& fixed) {
  const Clk horizon =
      std::max<Clk>(offset + moving.length(), fixed.length());
  Cell prev_m{}, prev_f{};
  for (Clk t = 0; t <= horizon; ++t) {
    const Clk j = t - offset;
    const Cell cm =
        j <= 0 ? moving.front().cell
               : moving.states[static_cast<std::size_t>(std::min<Clk>(
                                   j, moving.length()))].cell;
    const Cell cf = fixed
                        .states[static_cast<std::size_t>(std::min<Clk>(
                            t, fixed.length()))].cell;
    if (cm == cf) return true;
    if (t > 0 && cm == prev_f && cf == prev_m) return true;
    prev_m = cm;
    prev_f = cf;
  }
  return false;
}

}  // namespace

bool compute_start_offsets(std::vector<ConflictRobot>& robots,
                           const std::vector<RobotId>& order,
                           std::map<RobotId, int>& offsets,
                           std::vector<InactivationEvent>& events) {
  // Committed paths: every robot that will not yield -- non-participants,
  // inactive participants, and actives already scheduled (offsets baked
  // in as Halt prefixes).
  std::vector<std::pair<RobotId, Path>> committed;
  for (const ConflictRobot& r : robots)
    if (!r.participant || !r.active) committed.emplace_back(r.id, r.path);

  bool all_kept = true;
  for (RobotId id : order) {
    auto it = std::find_if(robots.begin(), robots.end(),
                           [&](const ConflictRobot& r) { return r.id == id; });
    require(it != robots.end() && it->participant && it->active,
            "offset order lists a non-active robot");
    ConflictRobot& r = *it;

    // Once every committed robot is at rest before this one moves, larger
    // offsets change nothing; testing up to the longest committed path is
    // exhaustive.
    int max_len = 0;
    for (const auto& [cid, cp] : committed)
      max_len = std::max(max_len, cp.length());

    int chosen = -1;
    RobotId blocker = 0;
    for (int off = 0; off <= max_len && chosen < 0; ++off) {
      blocker = 0;
      for (const auto& [cid, cp] : committed)
        if (offset_conflicts(r.path, off, cp)) {
          blocker = cid;
          break;
        }
      if (blocker == 0) chosen = off;
    }

    if (chosen < 0) {
      events.push_back(
          {id, "no conflict-free start offset against robot " +
                   std::to_string(blocker)});
      make_inactive(r);
      committed.emplace_back(id, r.path);
      all_kept = false;
      continue;
    }

    offsets[id] = chosen;
    Path padded;
    padded.states.assign(static_cast<std::size_t>(chosen), r.path.front());
    padded.states.insert(padded.states.end(), r.path.states.begin(),
                         r.path.states.end());
    committed.emplace_back(id, std::move(padded));
  }
  return all_kept;
}

ResolutionResult resolve_conflicts(std::vector<ConflictRobot> robots,
                      const PathExtractor& extract) {
  require(std::is_sorted(robots.begin(), robots.end(),
                         [](const ConflictRobot& a, const ConflictRobot& b) {
                           return a.id < b.id;
                         }),
          "resolver input must be sorted by id");

  ResolutionResult res;
  int participants = 0;
  for (const ConflictRobot& r : robots) participants += r.participant ? 1 : 0;

  const int cap = 2 * static_cast<int>(robots.size()) + 2;
  while (true) {
    require(res.iterations++ < cap,
            "conflict resolution did not reach a fixpoint");

    int inner = repair_cap(robots.size());
    while (adjust_crossover_paths(robots, extract) +
               adjust_nested_paths(robots, extract) >
           0)
      require(inner-- > 0, "path repair did not reach a fixpoint");

    PrecedenceMatrix m = compute_precedences(robots);
    AbsolutePrecedence ap = absolute_precedence(m, robots);
    if (!ap.acyclic()) {
      RobotId victim = break_precedence_cycles(robots, ap.cycle_witness);
      res.inactivations.push_back({victim, "precedence cycle"});
      continue;
    }

    std::map<RobotId, int> offsets;
    if (compute_start_offsets(robots, ap.order, offsets,
                              res.inactivations)) {
      res.offsets = std::move(offsets);
      break;
    }
  }

  for (const ConflictRobot& r : robots) {
    if (!r.participant) continue;
    res.active[r.id] = r.active;
    res.paths[r.id] = r.path;
    if (!r.active) res.offsets[r.id] = 0;
  }
  require(static_cast<int>(res.paths.size()) == participants,
          "conflict resolution lost a participant");
  return res;
}

int update_lookahead(std::int64_t t_start_ms, std::int64_t t_end_ms,
                     std::int64_t bias_ms, std::int64_t tau_ms, Clk now) {
  const std::int64_t budget = t_end_ms + (t_end_ms - t_start_ms) + bias_ms;
  return static_cast<int>(1 + budget / tau_ms - now);
}

RoundResult plan_round(const GridView& view, const RoundParams& params,
                           const RoundInput& in, PlanningClock& clock) {
  require(!in.participants.empty(), "a round needs participants");
  require(std::is_sorted(in.participants.begin(), in.participants.end()),
          "participants must be sorted");
  require(std::is_sorted(in.non_participants.begin(),
                         in.non_participants.end()),
          "non-participants must be sorted");

  // Stage one, once per round: optimal costs and assignment.
  CostMatrix matrix = compute_optimal_costs(
      view, in.reserved, in.participants, in.participant_states, params.kind);
  Assignment assignment = assign_optimal(matrix);
  std::vector<Path> phi =
      extract_optimal_paths(matrix, assignment, in.participant_states);

  RoundResult res;
  res.assignment_cost = assignment.total_cost;
  res.matched = assignment.matched;

  // Stage two: pick T_start, schedule against the remaining paths, retry
  // with a larger look-ahead if the computation overran T_start.
  int la = params.synchronous ? 0 : 1;
  const int attempt_cap = 8;
  while (true) {
    require(static_cast<int>(res.attempts.size()) < attempt_cap,
            "look-ahead loop did not converge");
    const std::int64_t began = clock.now_ms();
    const Clk clk_begin = began / params.tau_ms;
    const Clk t_start = clk_begin + la;

    // Index of each participant in the merged robot list, for extraction.
    std::vector<ConflictRobot> robots;
    std::vector<int> participant_row;  // resolver index -> matrix row
    {
      std::size_t p = 0, q = 0;
      while (p < in.participants.size() || q < in.non_participants.size()) {
        const bool take_p =
            q >= in.non_participants.size() ||
            (p < in.participants.size() &&
             in.participants[p] < in.non_participants[q]);
        if (take_p) {
          ConflictRobot r;
          r.id = in.participants[p];
          r.participant = true;
          r.path = phi[p];
          r.active = r.path.length() > 0;
          if (auto g = assignment.goal_of[p])
            r.goal = matrix.goals[static_cast<std::size_t>(*g)];
          participant_row.push_back(static_cast<int>(p));
          robots.push_back(std::move(r));
          ++p;
        } else {
          ConflictRobot r;
          r.id = in.non_participants[q];
          r.participant = false;
          r.path = remaining_path(in.committed[q], t_start);
          r.active = r.path.length() > 0;
          participant_row.push_back(-1);
          robots.push_back(std::move(r));
          ++q;
        }
      }
    }

    PathExtractor extract = [&](int robot_index, Cell goal) -> Path {
      const int row = participant_row[static_cast<std::size_t>(robot_index)];
      require(row >= 0, "path extraction requested for a non-participant");
      const ReachTree& t = matrix.trees[static_cast<std::size_t>(row)];
      auto end = t.best_state_at(goal);
      require(end.has_value(), "reassigned goal is unreachable");
      Path path;
      for (int s = *end; s != -1; s = t.pred[static_cast<std::size_t>(s)])
        path.states.push_back(t.state_of(s));
      std::reverse(path.states.begin(), path.states.end());
      return path;
    };

    ResolutionResult resolution = resolve_conflicts(robots, extract);
    const std::int64_t ended = clock.now_ms();
    const Clk now = ended / params.tau_ms;
    const bool success = params.synchronous || now < t_start;
    res.attempts.push_back({la, t_start, began, ended, success});

    if (success) {
      res.t_start = t_start;
      for (std::size_t i = 0; i < in.participants.size(); ++i) {
        const RobotId id = in.participants[i];
        const bool active = resolution.active.at(id);
        res.active[id] = active;
        res.offsets[id] = resolution.offsets.at(id);
        Path scheduled;
        if (active) {
          const Path& p = resolution.paths.at(id);
          scheduled.states.assign(
              static_cast<std::size_t>(resolution.offsets.at(id)), p.front());
          scheduled.states.insert(scheduled.states.end(), p.states.begin(),
                                  p.states.end());
          res.actives.push_back(id);
        } else {
          scheduled = Path::singleton(in.participant_states[i]);
        }
        res.scheduled[id] = std::move(scheduled);
      }
      res.inactivations = std::move(resolution.inactivations);
      res.duration_ms = ended - res.attempts.front().began_ms;
      return res;
    }
    la = update_lookahead(began, ended, params.bias_ms, params.tau_ms, now);
  }
}

}  // namespace covplan
