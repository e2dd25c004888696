#include "covplan/optimal_paths.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace covplan {

int ReachTree::state_index(const RobotState& s) const {
  int cell = (s.cell.y - 1) * width + (s.cell.x - 1);
  return kind == RobotKind::DifferentialDrive
             ? cell * 4 + static_cast<int>(s.heading)
             : cell;
}

RobotState ReachTree::state_of(int index) const {
  RobotState s;
  int cell = index;
  if (kind == RobotKind::DifferentialDrive) {
    s.heading = static_cast<Heading>(index % 4);
    cell = index / 4;
  }
  s.cell = {cell % width + 1, cell / width + 1};
  return s;
}

std::optional<int> ReachTree::best_state_at(Cell c) const {
  const int cell = (c.y - 1) * width + (c.x - 1);
  if (kind != RobotKind::DifferentialDrive)
    return dist[static_cast<std::size_t>(cell)] >= 0 ? std::optional<int>(cell)
                                                     : std::nullopt;
  std::optional<int> best;
  for (int h = 0; h < 4; ++h) {
    int idx = cell * 4 + h;
    if (dist[static_cast<std::size_t>(idx)] < 0) continue;
    if (!best || dist[static_cast<std::size_t>(idx)] <
                     dist[static_cast<std::size_t>(*best)])
      best = idx;
  }
  return best;
}

namespace {

// Breadth-first search over the robot's state graph, restricted to cells
// known traversable in the snapshot view. The expansion order (holonomic:
// E, N, W, S; differential drive: forward, turn-left, turn-right) fixes
// the predecessor tree, making extracted paths deterministic.
ReachTree bfs_reach(const GridView& view, RobotKind kind,
                    const RobotState& start) {
  ReachTree t;
  t.kind = kind;
  t.width = view.width();
  t.height = view.height();
  const int n = t.width * t.height * t.states_per_cell();
  t.dist.assign(static_cast<std::size_t>(n), -1);
  t.pred.assign(static_cast<std::size_t>(n), -1);

  require(view.traversable(start.cell),
          "participant stands on a cell not known traversable");
  const int s0 = t.state_index(start);
  t.dist[static_cast<std::size_t>(s0)] = 0;

  std::deque<int> queue{s0};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    const RobotState su = t.state_of(u);

    RobotState next[4];
    int n_next = 0;
    if (kind == RobotKind::DifferentialDrive) {
      Cell d = heading_offset(su.heading);
      Cell fwd{su.cell.x + d.x, su.cell.y + d.y};
      if (view.in_bounds(fwd) && view.traversable(fwd))
        next[n_next++] = RobotState{fwd, su.heading};
      next[n_next++] = RobotState{
          su.cell, static_cast<Heading>((static_cast<int>(su.heading) + 1) % 4)};
      next[n_next++] = RobotState{
          su.cell, static_cast<Heading>((static_cast<int>(su.heading) + 3) % 4)};
    } else {
      for (Heading h : {Heading::East, Heading::North, Heading::West,
                        Heading::South}) {
        Cell d = heading_offset(h);
        Cell c{su.cell.x + d.x, su.cell.y + d.y};
        if (view.in_bounds(c) && view.traversable(c))
          next[n_next++] = RobotState{c};
      }
    }
    for (int k = 0; k < n_next; ++k) {
      const int v = t.state_index(next[k]);
      if (t.dist[static_cast<std::size_t>(v)] >= 0) continue;
      t.dist[static_cast<std::size_t>(v)] =
          t.dist[static_cast<std::size_t>(u)] + 1;
      t.pred[static_cast<std::size_t>(v)] = u;
      queue.push_back(v);
    }
  }
  return t;
}

}  // namespace

CostMatrix compute_optimal_costs(const GridView& view,
                                 const std::vector<Cell>& reserved,
                                 const std::vector<RobotId>& participants,
                                 const std::vector<RobotState>& states,
                                 RobotKind kind) {
  require(participants.size() == states.size(),
          "participants and states differ in size");
  CostMatrix m;
  m.participants = participants;
  m.goals = unassigned_goals(view, reserved);
  m.cost.assign(participants.size() * m.goals.size(), std::nullopt);
  m.trees.reserve(participants.size());

  for (std::size_t i = 0; i < participants.size(); ++i) {
    m.trees.push_back(bfs_reach(view, kind, states[i]));
    const ReachTree& t = m.trees.back();
    for (std::size_t j = 0; j < m.goals.size(); ++j) {
      if (auto s = t.best_state_at(m.goals[j]))
        m.cost[i * m.goals.size() + j] =
            t.dist[static_cast<std::size_t>(*s)];
    }
  }
  return m;
}

Assignment assign_optimal(const CostMatrix& m) {
  const int rows = m.rows();
  const int cols = m.cols();
  Assignment a;
  a.goal_of.assign(static_cast<std::size_t>(rows), std::nullopt);
  if (rows == 0 || cols == 0) return a;

  // Min-cost maximum-cardinality bipartite matching by successive shortest
  // augmenting paths over reduced costs (Johnson potentials). Each phase
  // runs one Dijkstra from every unmatched row at once, so the cheapest
  // global augmentation is chosen -- processing rows one by one instead
  // can strand a cheap row behind an expensive one when goals are scarce.
  const long long INF = std::numeric_limits<long long>::max() / 4;
  std::vector<int> match_row(static_cast<std::size_t>(rows), -1);
  std::vector<int> match_col(static_cast<std::size_t>(cols), -1);
  std::vector<long long> pi_row(static_cast<std::size_t>(rows), 0);
  std::vector<long long> pi_col(static_cast<std::size_t>(cols), 0);

  auto cost_at = [&](int i, int j) -> std::optional<long long> {
    const auto& c = m.cost[static_cast<std::size_t>(i) * cols + j];
    if (!c) return std::nullopt;
    return static_cast<long long>(*c);
  };

  while (true) {
    std::vector<long long> d_row(static_cast<std::size_t>(rows), INF);
    std::vector<long long> d_col(static_cast<std::size_t>(cols), INF);
    std::vector<char> fin_col(static_cast<std::size_t>(cols), 0);
    std::vector<int> parent_col(static_cast<std::size_t>(cols), -1);

    for (int i = 0; i < rows; ++i) {
      if (match_row[static_cast<std::size_t>(i)] != -1) continue;
      d_row[static_cast<std::size_t>(i)] = 0;
      for (int j = 0; j < cols; ++j) {
        auto c = cost_at(i, j);
        if (!c) continue;
        long long r = *c + pi_row[static_cast<std::size_t>(i)] -
                      pi_col[static_cast<std::size_t>(j)];
        if (r < d_col[static_cast<std::size_t>(j)]) {
          d_col[static_cast<std::size_t>(j)] = r;
          parent_col[static_cast<std::size_t>(j)] = i;
        }
      }
    }

    int target = -1;
    while (true) {
      int jmin = -1;
      for (int j = 0; j < cols; ++j)
        if (!fin_col[static_cast<std::size_t>(j)] &&
            d_col[static_cast<std::size_t>(j)] < INF &&
            (jmin == -1 || d_col[static_cast<std::size_t>(j)] <
                               d_col[static_cast<std::size_t>(jmin)]))
          jmin = j;
      if (jmin == -1) break;  // nothing reachable; no augmenting path
      if (match_col[static_cast<std::size_t>(jmin)] == -1) {
        target = jmin;
        break;
      }
      fin_col[static_cast<std::size_t>(jmin)] = 1;
      const int k = match_col[static_cast<std::size_t>(jmin)];
      d_row[static_cast<std::size_t>(k)] =
          d_col[static_cast<std::size_t>(jmin)];  // matched edge is tight
      for (int j = 0; j < cols; ++j) {
        if (fin_col[static_cast<std::size_t>(j)]) continue;
        auto c = cost_at(k, j);
        if (!c) continue;
        long long nd = d_row[static_cast<std::size_t>(k)] + *c +
                       pi_row[static_cast<std::size_t>(k)] -
                       pi_col[static_cast<std::size_t>(j)];
        if (nd < d_col[static_cast<std::size_t>(j)]) {
          d_col[static_cast<std::size_t>(j)] = nd;
          parent_col[static_cast<std::size_t>(j)] = k;
        }
      }
    }
    if (target == -1) break;

    const long long D = d_col[static_cast<std::size_t>(target)];
    for (int j = target; j != -1;) {
      const int i = parent_col[static_cast<std::size_t>(j)];
      const int next = match_row[static_cast<std::size_t>(i)];
      match_col[static_cast<std::size_t>(j)] = i;
      match_row[static_cast<std::size_t>(i)] = j;
      j = next;
    }
    for (int i = 0; i < rows; ++i)
      pi_row[static_cast<std::size_t>(i)] +=
          std::min(d_row[static_cast<std::size_t>(i)], D);
    for (int j = 0; j < cols; ++j)
      pi_col[static_cast<std::size_t>(j)] +=
          std::min(d_col[static_cast<std::size_t>(j)], D);
  }

  for (int i = 0; i < rows; ++i) {
    const int j = match_row[static_cast<std::size_t>(i)];
    if (j == -1) continue;
    a.goal_of[static_cast<std::size_t>(i)] = j;
    a.total_cost += *cost_at(i, j);
    ++a.matched;
  }
  return a;
}

std::vector<Path> extract_optimal_paths(
    const CostMatrix& m, const Assignment& a,
    const std::vector<RobotState>& states) {
  require(static_cast<int>(a.goal_of.size()) == m.rows(),
          "assignment does not match the cost matrix");
  std::vector<Path> out;
  out.reserve(states.size());
  for (int i = 0; i < m.rows(); ++i) {
    if (!a.goal_of[static_cast<std::size_t>(i)]) {
      out.push_back(Path::singleton(states[static_cast<std::size_t>(i)]));
      continue;
    }
    const int j = *a.goal_of[static_cast<std::size_t>(i)];
    const ReachTree& t = m.trees[static_cast<std::size_t>(i)];
    auto end = t.best_state_at(m.goals[static_cast<std::size_t>(j)]);
    require(end.has_value(), "assigned goal is unreachable in the tree");

    Path p;
    for (int s = *end; s != -1; s = t.pred[static_cast<std::size_t>(s)])
      p.states.push_back(t.state_of(s));
    std::reverse(p.states.begin(), p.states.end());
    require(p.front() == states[static_cast<std::size_t>(i)],
            "extracted path does not begin at the participant");
    require(p.length() == *m.at(i, j),
            "extracted path length differs from the matrix cost");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace covplan
