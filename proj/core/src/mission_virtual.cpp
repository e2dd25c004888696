#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <queue>
#include <sstream>

#include "covplan/errors.hpp"
#include "covplan/mission.hpp"
#include "covplan/rng.hpp"
#include "mission_common.hpp"

namespace covplan {

namespace {

const char* stop_reason_name(StopReason r) {
  return r == StopReason::CoverageComplete ? "coverage_complete" : "stalled";
}

std::string format_mean(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string MissionReport::to_json() const {
  std::ostringstream os;  // keys emitted in sorted order
  os << '{' << "\"audit_violations\":" << audit.violations.size() << ','
     << "\"coverage_complete\":" << (coverage_complete ? "true" : "false")
     << ',' << "\"covered\":" << covered << ','
     << "\"free_cells\":" << free_cells << ','
     << "\"height\":" << height << ','
     << "\"intervals_f\":" << intervals.f << ','
     << "\"intervals_idle\":" << intervals.idle << ','
     << "\"intervals_p\":" << intervals.p << ','
     << "\"intervals_pf\":" << intervals.pf << ','
     << "\"lambda\":" << lambda << ','
     << "\"max_round_attempts\":" << max_round_attempts << ','
     << "\"mode\":\"" << covplan::to_string(mode) << "\",";
  os << "\"r_star_mean\":" << format_mean(r_star_mean) << ','
     << "\"retries_total\":" << retries_total << ','
     << "\"robots\":" << robots << ','
     << "\"rounds\":" << rounds << ','
     << "\"seed\":" << seed << ','
     << "\"stop_reason\":\"" << stop_reason_name(stop_reason) << "\",";
  os << "\"t_c_ms\":" << t_c_ms << ','
     << "\"t_c_ol_ms\":" << t_c_ol_ms << ','
     << "\"t_halt_ms\":" << t_halt_ms << ','
     << "\"t_m_ms\":" << t_m_ms << ','
     << "\"t_non_halt_ms\":" << t_non_halt_ms << ','
     << "\"t_p_ms\":" << t_p_ms << ','
     << "\"width\":" << width << '}';
  return os.str();
}

std::string MissionReport::csv_header() {
  return "run_id,seed,robots,width,height,mode,stop_reason,covered,"
         "free_cells,coverage_complete,t_m_ms,t_c_ms,t_c_ol_ms,t_p_ms,"
         "lambda,t_non_halt_ms,t_halt_ms,rounds,retries_total,"
         "max_round_attempts,r_star_mean,intervals_pf,intervals_f,"
         "intervals_p,intervals_idle,audit_violations";
}

std::string MissionReport::csv_row(int run_id) const {
  std::ostringstream os;
  os << run_id << ',' << seed << ',' << robots << ',' << width << ','
     << height << ',' << covplan::to_string(mode) << ','
     << stop_reason_name(stop_reason) << ',' << covered << ',' << free_cells
     << ',' << (coverage_complete ? 1 : 0) << ',' << t_m_ms << ',' << t_c_ms
     << ',' << t_c_ol_ms << ',' << t_p_ms << ',' << lambda << ','
     << t_non_halt_ms << ',' << t_halt_ms << ',' << rounds << ','
     << retries_total << ',' << max_round_attempts << ','
     << format_mean(r_star_mean) << ',' << intervals.pf << ',' << intervals.f
     << ',' << intervals.p << ',' << intervals.idle << ','
     << audit.violations.size();
  return os.str();
}

Workspace make_workspace(const ScenarioConfig& config) {
  if (config.map != "random") return Workspace::load_map_file(config.map);
  SplitMix64 rng(config.seed);
  return Workspace::random(config.width, config.height, config.density, rng);
}

std::vector<RobotState> deploy_robots(const Workspace& truth, int robots,
                                      RobotKind kind, std::uint64_t seed) {
  std::vector<Cell> free = truth.free_cells();
  require(robots >= 1, "at least one robot required");
  if (static_cast<std::size_t>(robots) > free.size())
    throw ConfigError("more robots than free cells");
  // Distinct stream from the map draw so a map file and a random map with
  // the same seed deploy identically.
  SplitMix64 rng(seed + 0x517cc1b727220a95ULL);
  rng.shuffle(free);
  std::vector<RobotState> out;
  out.reserve(static_cast<std::size_t>(robots));
  for (int i = 0; i < robots; ++i) {
    RobotState s;
    s.cell = free[static_cast<std::size_t>(i)];
    s.heading = kind == RobotKind::DifferentialDrive
                    ? static_cast<Heading>(rng.below(4))
                    : Heading::East;
    out.push_back(s);
  }
  return out;
}

MissionReport run_mission(const ScenarioConfig& config) {
  config.validate();
  const Workspace truth = make_workspace(config);
  if (!truth.strongly_connected())
    throw ConfigError("free space of the workspace is not connected");
  return config.clock == ClockKind::Virtual
             ? run_mission_virtual(config, truth)
             : run_mission_wallclock(config, truth);
}

namespace {

// Discrete event kinds; the rank breaks time ties: a finished round is
// applied before any request arriving at the same instant.
enum : int { kRoundComplete = 0, kRequestArrive = 1 };

struct Event {
  std::int64_t time_ms = 0;
  int rank = kRequestArrive;
  RobotId robot = 0;  // 0 for round completions
  long seq = 0;       // insertion order, final tie-break
  friend auto operator<=>(const Event&, const Event&) = default;
};

struct PendingRound {
  RoundStartInfo info;
  RoundResult result;
};

struct SimRobot {
  RobotId id = 0;
  RobotState state;
  GridView local{1, 1};
  std::optional<TimedPath> executing;  // dispatched, not yet reported back
};

// Planning clock whose now_ms() answers are scripted up front; the
// planning loop reads it exactly twice per attempt.
class ScriptClock : public PlanningClock {
 public:
  explicit ScriptClock(std::vector<std::int64_t> script)
      : script_(std::move(script)) {}

  std::int64_t now_ms() override {
    require(next_ < script_.size(),
            "planning exceeded its scripted attempt budget");
    return script_[next_++];
  }

  std::int64_t last() const { return script_[next_ - 1]; }

 private:
  std::vector<std::int64_t> script_;
  std::size_t next_ = 0;
};

class VirtualMission {
 public:
  VirtualMission(const ScenarioConfig& config, const Workspace& truth)
      : config_(config), truth_(truth),
        coord_(config.robots, truth.width(), truth.height(),
               config.mode == MissionMode::Synchronous ? EtaMode::FullTeam
                                                       : EtaMode::Dynamic) {}

  MissionReport run() {
    deploy();
    while (!stopped_) {
      require(!events_.empty(), "event queue drained without a stop");
      const Event ev = events_.top();
      events_.pop();
      now_ms_ = ev.time_ms;
      if (ev.rank == kRoundComplete)
        on_round_complete(ev);
      else
        on_request_arrive(ev);
    }
    return finalize();
  }

 private:
  Clk now_clk() const { return now_ms_ / config_.tau_ms; }

  void deploy() {
    const std::vector<RobotState> starts =
        deploy_robots(truth_, config_.robots, config_.kind, config_.seed);
    robots_.resize(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      SimRobot& r = robots_[i];
      r.id = static_cast<RobotId>(i) + 1;
      r.state = starts[i];
      r.local = init_local_view(truth_, starts[i].cell);
      coord_.register_robot(r.id, r.state);
      schedule_request(r.id, 0);
    }
  }

  void schedule_request(RobotId id, Clk t_stop) {
    events_.push({(t_stop + config_.transport_delay) * config_.tau_ms,
                  kRequestArrive, id, seq_++});
  }

  void on_request_arrive(const Event& ev) {
    SimRobot& r = robots_[static_cast<std::size_t>(ev.robot - 1)];
    if (r.executing) {
      // Sense along the just-finished path, in driving order.
      const Path& p = r.executing->path;
      for (std::size_t j = 1; j < p.states.size(); ++j)
        sense_and_update(r.local, truth_, p.states[j].cell);
      r.state = p.back();
      r.executing.reset();
    }
    handle(coord_.receive_local_view({r.id, r.state, r.local}, now_clk()));
  }

  void on_round_complete(const Event& ev) {
    auto node = pending_.extract(ev.seq);
    require(!node.empty(), "round completion without a pending round");
    const PendingRound& round = node.mapped();
    const RoundCompletion done =
        coord_.complete_round(round.info, round.result, now_clk());
    for (const Dispatch& d : done.dispatches) {
      SimRobot& r = robots_[static_cast<std::size_t>(d.id - 1)];
      require(!r.executing, "robot dispatched while still executing");
      r.executing = TimedPath{d.path, d.t_start};
      ledger_.account_dispatch(d, config_.tau_ms);
      schedule_request(d.id, d.t_start + d.path.length());
    }
    handle(done.next);
  }

  void handle(const CoordinatorOutcome& outcome) {
    switch (outcome.decision) {
      case Decision::Wait:
      case Decision::Skip:
        return;
      case Decision::Stop:
        stopped_ = true;
        stop_reason_ = *outcome.stop_reason;
        return;
      case Decision::Start:
        start_round(*outcome.start);
        return;
    }
  }

  // Runs the planning round immediately (its input is a snapshot; the
  // event loop is single-threaded) and schedules its completion at the
  // virtual time the planning model says it takes.
  void start_round(RoundStartInfo info) {
    const bool sync = config_.mode == MissionMode::Synchronous;
    const std::int64_t dur = config_.planner == PlannerModel::Fixed
                                 ? config_.planner_intervals * config_.tau_ms
                                 : 0;
    // Two clock reads per attempt; under the fixed model a first
    // concurrent attempt spanning >= 1 interval always overruns, and the
    // repeat is guaranteed to land.
    std::vector<std::int64_t> script{now_ms_, now_ms_ + dur};
    if (!sync && dur > 0)
      script.insert(script.end(),
                    {now_ms_ + dur, now_ms_ + 2 * dur});

    RoundParams params;
    params.kind = config_.kind;
    params.tau_ms = config_.tau_ms;
    params.bias_ms = config_.bias_ms;
    params.synchronous = sync;

    RoundInput in;
    in.participants = info.participants;
    in.participant_states = info.participant_states;
    in.non_participants = info.non_participants;
    in.committed = info.committed;
    in.reserved = info.reserved;

    ScriptClock clock(std::move(script));
    RoundResult result = plan_round(info.view, params, in, clock);
    require(static_cast<int>(result.attempts.size()) <= 2,
            "virtual planning must settle within two attempts");

    ledger_.planning.push_back({result.attempts.front().began_ms,
                                result.attempts.back().ended_ms});
    // Synchronous baseline: the fleet stands still while planning runs,
    // so computation consumes no virtual time (it is ledgered in t_c).
    const std::int64_t complete_at =
        sync ? now_ms_ : result.attempts.back().ended_ms;
    const long seq = seq_++;
    pending_.emplace(seq, PendingRound{std::move(info), std::move(result)});
    events_.push({complete_at, kRoundComplete, 0, seq});
  }

  MissionReport finalize() {
    return detail::assemble_report(
        config_, truth_, coord_, ledger_, stop_reason_, now_ms_,
        config_.mode == MissionMode::Synchronous);
  }

  const ScenarioConfig& config_;
  const Workspace& truth_;
  Coordinator coord_;
  std::vector<SimRobot> robots_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::map<long, PendingRound> pending_;
  detail::MissionLedger ledger_;
  std::int64_t now_ms_ = 0;
  long seq_ = 0;
  bool stopped_ = false;
  StopReason stop_reason_ = StopReason::CoverageComplete;
};

double mean_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return xs.empty() ? 0.0 : m / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

MissionReport run_mission_virtual(const ScenarioConfig& config,
                                  const Workspace& truth) {
  VirtualMission mission(config, truth);
  return mission.run();
}

namespace detail {

MissionReport assemble_report(const ScenarioConfig& config,
                              const Workspace& truth,
                              const Coordinator& coord,
                              const MissionLedger& ledger, StopReason reason,
                              std::int64_t stop_ms,
                              bool planning_outside_time) {
  MissionReport rep;
  rep.seed = config.seed;
  rep.robots = config.robots;
  rep.width = truth.width();
  rep.height = truth.height();
  rep.mode = config.mode;
  rep.stop_reason = reason;
  rep.covered = coord.global_view().count(CellClass::Covered);
  rep.free_cells = truth.free_count();
  rep.coverage_complete = reason == StopReason::CoverageComplete;
  if (rep.coverage_complete)
    require(rep.covered == rep.free_cells,
            "coverage reported complete with free cells uncovered");

  rep.lambda = stop_ms / config.tau_ms;
  for (const RoundLogRecord& r : coord.round_log()) {
    rep.t_c_ms += r.t_wall_ms;
    rep.retries_total += r.retries;
    rep.max_round_attempts = std::max(rep.max_round_attempts, r.retries + 1);
    rep.r_star_mean += r.r_star;
  }
  rep.rounds = static_cast<int>(coord.round_log().size());
  if (rep.rounds > 0) rep.r_star_mean /= rep.rounds;
  rep.t_m_ms = planning_outside_time ? rep.t_c_ms + stop_ms : stop_ms;
  rep.t_p_ms =
      following_interval_count(ledger.following) * config.tau_ms;
  const std::vector<MsSpan> planning =
      planning_outside_time ? std::vector<MsSpan>{} : ledger.planning;
  rep.t_c_ol_ms =
      overlapped_computation_ms(planning, ledger.following, config.tau_ms);
  rep.intervals = classify_intervals(planning, ledger.following, rep.lambda,
                                     config.tau_ms);
  rep.t_non_halt_ms = ledger.t_non_halt_ms;
  rep.t_halt_ms = ledger.t_halt_ms;
  rep.round_log = coord.round_log();

  rep.trace.kind = config.kind;
  rep.trace.horizon = rep.lambda;
  std::vector<RobotId> ids;
  std::vector<TimedPath> padded;
  for (const auto& [id, full] : coord.full_paths()) {
    Path p = full;
    while (p.length() < rep.lambda) p.states.push_back(p.back());
    rep.trace.robots.emplace(id, TimedPath{p, 0});
    ids.push_back(id);
    padded.push_back(TimedPath{std::move(p), 0});
  }
  rep.audit = validate_path_set(ids, padded, truth, rep.lambda);
  return rep;
}

}  // namespace detail

std::vector<AggregateRow> aggregate_reports(
    const std::vector<MissionReport>& runs) {
  const std::vector<std::pair<std::string,
                              std::function<double(const MissionReport&)>>>
      metrics = {
          {"covered", [](const MissionReport& r) { return double(r.covered); }},
          {"t_m_ms", [](const MissionReport& r) { return double(r.t_m_ms); }},
          {"t_c_ms", [](const MissionReport& r) { return double(r.t_c_ms); }},
          {"t_c_ol_ms",
           [](const MissionReport& r) { return double(r.t_c_ol_ms); }},
          {"t_p_ms", [](const MissionReport& r) { return double(r.t_p_ms); }},
          {"lambda", [](const MissionReport& r) { return double(r.lambda); }},
          {"t_non_halt_ms",
           [](const MissionReport& r) { return double(r.t_non_halt_ms); }},
          {"t_halt_ms",
           [](const MissionReport& r) { return double(r.t_halt_ms); }},
          {"rounds", [](const MissionReport& r) { return double(r.rounds); }},
          {"retries_total",
           [](const MissionReport& r) { return double(r.retries_total); }},
          {"r_star_mean",
           [](const MissionReport& r) { return r.r_star_mean; }},
          {"intervals_pf",
           [](const MissionReport& r) { return double(r.intervals.pf); }},
          {"intervals_f",
           [](const MissionReport& r) { return double(r.intervals.f); }},
          {"intervals_p",
           [](const MissionReport& r) { return double(r.intervals.p); }},
          {"intervals_idle",
           [](const MissionReport& r) { return double(r.intervals.idle); }},
      };
  std::vector<AggregateRow> out;
  out.reserve(metrics.size());
  for (const auto& [name, get] : metrics) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const MissionReport& r : runs) xs.push_back(get(r));
    AggregateRow row;
    row.metric = name;
    row.mean = mean_of(xs);
    row.stddev = stddev_of(xs, row.mean);
    out.push_back(std::move(row));
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "metric,mean,stddev\n";
  for (const AggregateRow& r : rows)
    os << r.metric << ',' << format_mean(r.mean) << ','
       << format_mean(r.stddev) << '\n';
  return os.str();
}

}  // namespace covplan
