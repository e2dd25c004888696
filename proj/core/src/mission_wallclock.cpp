#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "covplan/errors.hpp"
#include "covplan/mission.hpp"
#include "mission_common.hpp"

namespace covplan {

namespace {

using SteadyPoint = std::chrono::steady_clock::time_point;

class SteadyClock : public PlanningClock {
 public:
  explicit SteadyClock(SteadyPoint epoch) : epoch_(epoch) {}

  std::int64_t now_ms() override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - epoch_)
        .count();
  }

 private:
  SteadyPoint epoch_;
};

// One mission over real time: one thread per robot driving against the
// wall clock, planning rounds on their own threads, the protocol state in
// the shared coordinator.
class WallMission {
 public:
  WallMission(const ScenarioConfig& config, const Workspace& truth)
      : config_(config), truth_(truth),
        coord_(config.robots, truth.width(), truth.height(),
               config.mode == MissionMode::Synchronous ? EtaMode::FullTeam
                                                       : EtaMode::Dynamic),
        epoch_(std::chrono::steady_clock::now()), clock_(epoch_) {}

  MissionReport run() {
    std::vector<RobotState> starts =
        deploy_robots(truth_, config_.robots, config_.kind, config_.seed);
    robots_.resize(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      robots_[i].id = static_cast<RobotId>(i) + 1;
      robots_[i].state = starts[i];
      robots_[i].local = init_local_view(truth_, starts[i].cell);
      coord_.register_robot(robots_[i].id, starts[i]);
    }
    std::vector<std::thread> drivers;
    drivers.reserve(robots_.size());
    for (Robot& r : robots_)
      drivers.emplace_back([this, &r] { drive(r); });
    for (std::thread& t : drivers) t.join();
    join_planners();

    std::lock_guard<std::mutex> lock(mu_);
    return detail::assemble_report(config_, truth_, coord_, ledger_,
                                   stop_reason_, stop_ms_, false);
  }

 private:
  struct Robot {
    RobotId id = 0;
    RobotState state;
    GridView local{1, 1};
    std::optional<Dispatch> mailbox;
  };

  SteadyPoint at_interval(Clk t) const {
    return epoch_ + std::chrono::milliseconds(t * config_.tau_ms);
  }

  void drive(Robot& r) {
    if (config_.transport_delay > 0)
      std::this_thread::sleep_until(at_interval(config_.transport_delay));
    while (true) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopped_) return;
      }
      handle(coord_.receive_local_view({r.id, r.state, r.local},
                                       clock_.now_ms() / config_.tau_ms));
      Dispatch d;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return stopped_ || r.mailbox.has_value(); });
        if (!r.mailbox) return;  // stopped while idle
        d = std::move(*r.mailbox);
        r.mailbox.reset();
      }
      for (int j = 1; j <= d.path.length(); ++j) {
        std::this_thread::sleep_until(at_interval(d.t_start + j));
        r.state = d.path.states[static_cast<std::size_t>(j)];
        sense_and_update(r.local, truth_, r.state.cell);
      }
      const Clk t_stop = d.t_start + d.path.length();
      if (config_.transport_delay > 0)
        std::this_thread::sleep_until(
            at_interval(t_stop + config_.transport_delay));
    }
  }

  void handle(const CoordinatorOutcome& outcome) {
    if (outcome.decision == Decision::Start) {
      std::lock_guard<std::mutex> lock(mu_);
      planners_.emplace_back(
          [this, info = *outcome.start] { plan(info); });
    } else if (outcome.decision == Decision::Stop) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!stopped_) {
        stopped_ = true;
        stop_reason_ = *outcome.stop_reason;
        stop_ms_ = clock_.now_ms();
      }
      cv_.notify_all();
    }
  }

  void plan(const RoundStartInfo& info) {
    RoundParams params;
    params.kind = config_.kind;
    params.tau_ms = config_.tau_ms;
    params.bias_ms = config_.bias_ms;
    params.synchronous = config_.mode == MissionMode::Synchronous;

    RoundInput in;
    in.participants = info.participants;
    in.participant_states = info.participant_states;
    in.non_participants = info.non_participants;
    in.committed = info.committed;
    in.reserved = info.reserved;

    RoundResult result = plan_round(info.view, params, in, clock_);
    const RoundCompletion done =
        coord_.complete_round(info, result, clock_.now_ms() / config_.tau_ms);
    {
      std::lock_guard<std::mutex> lock(mu_);
      ledger_.planning.push_back({result.attempts.front().began_ms,
                                  result.attempts.back().ended_ms});
      if (result.retries() > 1) ++overrun_anomalies_;
      for (const Dispatch& d : done.dispatches) {
        ledger_.account_dispatch(d, config_.tau_ms);
        robots_[static_cast<std::size_t>(d.id - 1)].mailbox = d;
      }
      cv_.notify_all();
    }
    handle(done.next);
  }

  void join_planners() {
    // A planner can spawn a successor round; drain until quiescent.
    while (true) {
      std::vector<std::thread> batch;
      {
        std::lock_guard<std::mutex> lock(mu_);
        batch.swap(planners_);
      }
      if (batch.empty()) return;
      for (std::thread& t : batch) t.join();
    }
  }

  const ScenarioConfig& config_;
  const Workspace& truth_;
  Coordinator coord_;
  SteadyPoint epoch_;
  SteadyClock clock_;
  std::vector<Robot> robots_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::thread> planners_;
  detail::MissionLedger ledger_;
  bool stopped_ = false;
  StopReason stop_reason_ = StopReason::CoverageComplete;
  std::int64_t stop_ms_ = 0;
  int overrun_anomalies_ = 0;  // rounds needing a third attempt
};

}  // namespace

MissionReport run_mission_wallclock(const ScenarioConfig& config,
                                    const Workspace& truth) {
  WallMission mission(config, truth);
  return mission.run();
}

}  // namespace covplan
