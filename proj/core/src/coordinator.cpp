#include "covplan/coordinator.hpp"

#include <algorithm>
#include <sstream>

namespace covplan {

std::string RoundLogRecord::csv_header() {
  return "round_id,clk_begin,clk_end,t_wall_ms,R*,n_active,n_inactive,"
         "T_start,retries";
}

std::string RoundLogRecord::csv_row() const {
  std::ostringstream os;
  os << round_id << ',' << clk_begin << ',' << clk_end << ',' << t_wall_ms
     << ',' << r_star << ',' << n_active << ',' << n_inactive << ','
     << t_start << ',' << retries;
  return os.str();
}

void append_full_path(Path& full, const Path& segment, Clk t_start) {
  const Clk t_stop = full.length();
  require(t_start >= t_stop, "segment starts before the path's final state");
  if (t_start == t_stop) {
    // The segment's first interval coincides with the path's final one.
    require(segment.front() == full.back(),
            "segment does not continue from the path's final state");
  } else {
    for (Clk t = t_stop + 1; t < t_start; ++t)
      full.states.push_back(full.back());
    require(segment.front() == full.back(),
            "segment does not start at the robot's resting state");
    full.states.push_back(segment.front());
  }
  full.states.insert(full.states.end(), segment.states.begin() + 1,
                     segment.states.end());
  require(full.length() == t_start + segment.length(),
          "full-path length drifted from its stop time");
}

Coordinator::Coordinator(int team_size, int width, int height, EtaMode mode)
    : team_size_(team_size), mode_(mode), view_(width, height),
      eta_(team_size) {
  require(team_size >= 1, "team size must be positive");
}

void Coordinator::register_robot(RobotId id, const RobotState& start) {
  std::lock_guard<std::mutex> lock(mu_);
  require(id >= 1 && id <= team_size_, "robot id out of range");
  require(!pi_.count(id), "robot registered twice");
  pi_.emplace(id, Path::singleton(start));
  t_stop_.emplace(id, 0);
}

CoordinatorOutcome Coordinator::receive_local_view(const RequestMsg& req,
                                                   Clk now) {
  std::lock_guard<std::mutex> lock(mu_);
  require(pi_.count(req.id) != 0, "request from an unregistered robot");
  if (std::binary_search(i_par_.begin(), i_par_.end(), req.id))
    throw ProtocolError("duplicate request from robot " +
                        std::to_string(req.id));
  if (!(req.state == pi_.at(req.id).back()))
    throw ConsistencyError("robot " + std::to_string(req.id) +
                           " reported a state off its committed path");
  fuse_views(view_, req.view);
  i_par_.insert(
      std::upper_bound(i_par_.begin(), i_par_.end(), req.id), req.id);
  states_[req.id] = req.state;
  return check_criteria(now);
}

CoordinatorOutcome Coordinator::check_criteria(Clk now) {
  CoordinatorOutcome out;
  if (in_flight_ || static_cast<int>(i_par_.size()) < eta_) {
    out.decision = Decision::Wait;
    return out;
  }
  const std::vector<RobotId> nps = complement(i_par_);
  std::vector<Cell> reserved = reserved_goals_locked(nps);
  const std::vector<Cell> unassigned = unassigned_goals(view_, reserved);

  if (!unassigned.empty()) {
    RoundStartInfo info;
    info.round_id = ++round_seq_;
    info.clk_begin = now;
    info.view = view_;
    info.reserved = std::move(reserved);
    info.participants = i_par_;
    info.participant_states.reserve(i_par_.size());
    for (RobotId id : i_par_) info.participant_states.push_back(states_.at(id));
    info.non_participants = nps;
    info.committed.reserve(nps.size());
    for (RobotId id : nps) info.committed.push_back(pi_.at(id));
    i_par_.clear();
    states_.clear();
    if (mode_ == EtaMode::Dynamic) eta_ = 0;
    in_flight_ = true;
    out.decision = Decision::Start;
    out.start = std::move(info);
    return out;
  }

  if (static_cast<int>(i_par_.size()) == team_size_) {
    // The whole team is idle and nothing is reserved, so no unassigned
    // goal means no goal at all.
    out.decision = Decision::Stop;
    out.stop_reason = view_.count(CellClass::Goal) == 0
                          ? StopReason::CoverageComplete
                          : StopReason::Stalled;
    return out;
  }

  // Known goals are all reserved by robots still driving: raise the bar
  // so the next finisher(s) join before a round starts.
  increment_eta(nps, now);
  out.decision = Decision::Skip;
  return out;
}

void Coordinator::increment_eta(const std::vector<RobotId>& ids, Clk now) {
  if (mode_ != EtaMode::Dynamic) return;
  Clk t_min = -1;
  for (RobotId id : ids) {
    const Clk t = t_stop_.at(id);
    if (t > now && (t_min < 0 || t < t_min)) t_min = t;
  }
  if (t_min < 0) {
    ++eta_warnings_;  // nobody is moving; nothing to wait for
    return;
  }
  for (RobotId id : ids)
    if (t_stop_.at(id) == t_min) ++eta_;
}

RoundCompletion Coordinator::complete_round(const RoundStartInfo& info,
                                            const RoundResult& result,
                                            Clk now) {
  std::lock_guard<std::mutex> lock(mu_);
  require(in_flight_, "round completion without a round in flight");
  RoundCompletion out;

  for (std::size_t i = 0; i < info.participants.size(); ++i) {
    const RobotId id = info.participants[i];
    if (result.active.at(id)) {
      const Path& sched = result.scheduled.at(id);
      append_full_path(pi_.at(id), sched, result.t_start);
      t_stop_.at(id) = result.t_start + sched.length();
      out.dispatches.push_back({id, sched, result.t_start});
    } else {
      // Re-enqueue: the robot keeps waiting as a participant of the next
      // round; it counts toward the intended participant total.
      require(!std::binary_search(i_par_.begin(), i_par_.end(), id),
              "inactive participant already re-enqueued");
      i_par_.insert(std::upper_bound(i_par_.begin(), i_par_.end(), id), id);
      states_[id] = info.participant_states[i];
      if (mode_ == EtaMode::Dynamic) ++eta_;
    }
  }
  if (mode_ == EtaMode::Dynamic) {
    for (RobotId id : info.non_participants)
      if (t_stop_.at(id) <= now) ++eta_;
    if (eta_ == 0) increment_eta(complement({}), now);
    // An all-inactive round must not re-fire against the same snapshot in
    // the same interval; wait for the next finisher instead.
    if (result.actives.empty()) increment_eta(complement(i_par_), now);
  }
  in_flight_ = false;

  out.log.round_id = info.round_id;
  out.log.clk_begin = info.clk_begin;
  out.log.clk_end = now;
  out.log.t_wall_ms = result.duration_ms;
  out.log.r_star = static_cast<int>(info.participants.size());
  out.log.n_active = static_cast<int>(result.actives.size());
  out.log.n_inactive = out.log.r_star - out.log.n_active;
  out.log.t_start = result.t_start;
  out.log.retries = result.retries();
  log_.push_back(out.log);

  bool any_moving = false;
  for (const auto& [id, t] : t_stop_) any_moving = any_moving || t > now;
  if (result.actives.empty() && !any_moving &&
      static_cast<int>(info.participants.size()) == team_size_ &&
      view_.count(CellClass::Goal) > 0) {
    // The whole team took part and nobody got a path: a re-run would see
    // the identical snapshot (no request can arrive while everyone waits)
    // and fail the same way forever. With a partial round the next one
    // differs -- late joiners widen the participant set -- so only the
    // full-team case is a proven dead end.
    out.next.decision = Decision::Stop;
    out.next.stop_reason = StopReason::Stalled;
    return out;
  }
  out.next = check_criteria(now);
  return out;
}

std::vector<RobotId> Coordinator::complement(
    const std::vector<RobotId>& ids) const {
  std::vector<RobotId> out;
  out.reserve(static_cast<std::size_t>(team_size_) - ids.size());
  for (RobotId id = 1; id <= team_size_; ++id)
    if (!std::binary_search(ids.begin(), ids.end(), id)) out.push_back(id);
  return out;
}

std::vector<Cell> Coordinator::reserved_goals_locked(
    const std::vector<RobotId>& non_participants) const {
  std::vector<Cell> out;
  for (RobotId id : non_participants) {
    const Path& p = pi_.at(id);
    if (p.length() > 0) out.push_back(p.back().cell);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Coordinator::eta() const {
  std::lock_guard<std::mutex> lock(mu_);
  return eta_;
}

bool Coordinator::round_in_flight() const {
  std::lock_guard<std::mutex> lock(mu_);
  return in_flight_;
}

int Coordinator::eta_warnings() const {
  std::lock_guard<std::mutex> lock(mu_);
  return eta_warnings_;
}

std::vector<Cell> Coordinator::reserved_goals() const {
  std::lock_guard<std::mutex> lock(mu_);
  return reserved_goals_locked(complement(i_par_));
}

}  // namespace covplan
