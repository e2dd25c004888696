#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "covplan/audit.hpp"
#include "covplan/config.hpp"
#include "covplan/errors.hpp"
#include "covplan/mission.hpp"

namespace covplan::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << content;
}

struct RunArgs {
  std::string config_path;
  bool print_only = false;
  // Key/value overrides in config-key form, applied on top of the file.
  std::map<std::string, std::string> overrides;
};

// Assembles the effective scenario: file (or defaults), then overrides.
// The wall-clock planning bias default applies to the final clock choice,
// so flipping the clock on the command line behaves like writing it in
// the file; an explicit bias from either source always wins.
ScenarioConfig effective_config(const RunArgs& args) {
  std::string text;
  if (!args.config_path.empty()) text = read_file(args.config_path);
  ScenarioConfig cfg = text.empty() ? ScenarioConfig{} : parse_config(text);
  bool bias_given = text.find("bias_ms") != std::string::npos;
  for (const auto& [key, value] : args.overrides) {
    cfg.set(key, value);
    if (key == "bias_ms") bias_given = true;
  }
  if (!bias_given) cfg.bias_ms = cfg.clock == ClockKind::Wall ? 50 : 0;
  return cfg;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg = effective_config(args);
  if (args.print_only) {
    out << print_config(cfg);
    return 0;
  }
  cfg.validate();

  // Repeats draw consecutive seeds; each run is independent, so they can
  // execute on a small worker pool. Reports land indexed by run id and
  // all output is written after the joins, keeping artifacts byte-equal
  // for any job count.
  const int n = cfg.repeats;
  std::vector<MissionReport> reports(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        ScenarioConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
        run_cfg.repeats = 1;
        run_cfg.jobs = 1;
        reports[static_cast<std::size_t>(i)] = run_mission(run_cfg);
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int jobs = std::min(cfg.jobs, n);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (int i = 0; i < n; ++i)
    if (failures[static_cast<std::size_t>(i)])
      std::rethrow_exception(failures[static_cast<std::size_t>(i)]);

  if (!cfg.output_dir.empty()) {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    std::ostringstream runs;
    runs << MissionReport::csv_header() << '\n';
    for (int i = 0; i < n; ++i) {
      const MissionReport& rep = reports[static_cast<std::size_t>(i)];
      const std::string stem = "run_" + std::to_string(i);
      write_file(dir / (stem + "_report.json"), rep.to_json() + "\n");
      if (cfg.emit_trace)
        write_file(dir / (stem + "_trace.csv"), trace_to_string(rep.trace));
      if (cfg.emit_round_log) {
        std::ostringstream log;
        log << RoundLogRecord::csv_header() << '\n';
        for (const RoundLogRecord& r : rep.round_log) log << r.csv_row() << '\n';
        write_file(dir / (stem + "_rounds.csv"), log.str());
      }
      runs << rep.csv_row(i) << '\n';
    }
    write_file(dir / "runs.csv", runs.str());
    write_file(dir / "aggregate.csv",
               aggregate_csv(aggregate_reports(reports)));
  }

  std::size_t violations = 0;
  for (int i = 0; i < n; ++i) {
    const MissionReport& rep = reports[static_cast<std::size_t>(i)];
    out << "run " << i << ": seed " << rep.seed << " covered " << rep.covered
        << '/' << rep.free_cells << " rounds " << rep.rounds << " lambda "
        << rep.lambda << " violations " << rep.audit.violations.size()
        << '\n';
    violations += rep.audit.violations.size();
  }
  if (violations > 0) {
    err << "error: audit found " << violations << " violation(s)\n";
    return 3;
  }
  return 0;
}

int cmd_validate_trace(const std::string& trace_path,
                       const std::string& map_path, std::ostream& out,
                       std::ostream& err) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace: " + trace_path);
  const Trace trace = read_trace(in);
  const Workspace truth = Workspace::load_map_file(map_path);
  std::vector<RobotId> ids;
  std::vector<TimedPath> paths;
  ids.reserve(trace.robots.size());
  paths.reserve(trace.robots.size());
  for (const auto& [id, tp] : trace.robots) {
    ids.push_back(id);
    paths.push_back(tp);
  }
  const AuditReport audit =
      validate_path_set(ids, paths, truth, trace.horizon);
  out << "robots " << ids.size() << " horizon " << trace.horizon
      << " violations " << audit.violations.size() << '\n';
  for (const Violation& v : audit.violations) out << v.describe() << '\n';
  if (!audit.clean()) {
    err << "error: trace violates the path conditions\n";
    return 3;
  }
  return 0;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Recomputes aggregate statistics from a runs.csv, matching the columns
// by header name so the file remains the contract.
int cmd_stats(const std::string& dir, std::ostream& out) {
  static const char* const kMetrics[] = {
      "covered",       "t_m_ms",        "t_c_ms",      "t_c_ol_ms",
      "t_p_ms",        "lambda",        "t_non_halt_ms", "t_halt_ms",
      "rounds",        "retries_total", "r_star_mean", "intervals_pf",
      "intervals_f",   "intervals_p",   "intervals_idle"};
  const std::string text = read_file((fs::path(dir) / "runs.csv").string());
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("runs.csv is empty");
  const std::vector<std::string> header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* m : kMetrics)
    if (!col.count(m))
      throw ConfigError(std::string("runs.csv lacks column: ") + m);

  std::map<std::string, std::vector<double>> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size())
      throw ConfigError("runs.csv: row width does not match the header");
    for (const char* m : kMetrics)
      values[m].push_back(std::stod(fields[col.at(m)]));
  }

  std::ostringstream os;
  os << "metric,mean,stddev\n";
  os << std::fixed << std::setprecision(6);
  for (const char* m : kMetrics) {
    const std::vector<double>& xs = values[m];
    double mean = 0.0;
    for (double x : xs) mean += x;
    if (!xs.empty()) mean /= static_cast<double>(xs.size());
    double sd = 0.0;
    if (xs.size() >= 2) {
      double acc = 0.0;
      for (double x : xs) acc += (x - mean) * (x - mean);
      sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    os << m << ',' << mean << ',' << sd << '\n';
  }
  out << os.str();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"coverage path planning missions for robot teams"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a mission scenario");
  run->add_option("--config", run_args.config_path,
                  "scenario file (key = value lines, or a JSON object)");
  run->add_flag("--print-config", run_args.print_only,
                "print the effective scenario and exit");
  // Every config key doubles as a long option; values funnel through
  // ScenarioConfig::set so files and flags share one validation path.
  static constexpr std::pair<const char*, const char*> kKeys[] = {
      {"--map", "map"},
      {"--width", "width"},
      {"--height", "height"},
      {"--density", "density"},
      {"--robots", "robots"},
      {"--kind", "kind"},
      {"--seed", "seed"},
      {"--mode", "mode"},
      {"--clock", "clock"},
      {"--planner", "planner"},
      {"--planner-intervals", "planner_intervals"},
      {"--transport-delay", "transport_delay"},
      {"--tau-ms", "tau_ms"},
      {"--bias-ms", "bias_ms"},
      {"--repeats", "repeats"},
      {"--jobs", "jobs"},
      {"--output-dir", "output_dir"},
      {"--emit-trace", "emit_trace"},
      {"--emit-round-log", "emit_round_log"},
  };
  for (const auto& [flag, key] : kKeys) {
    const std::string key_name = key;
    run->add_option_function<std::string>(
        flag,
        [&run_args, key_name](const std::string& v) {
          run_args.overrides[key_name] = v;
        },
        "override config key '" + key_name + "'");
  }

  std::string trace_path;
  std::string map_path;
  CLI::App* vt = app.add_subcommand(
      "validate-trace", "audit a recorded trace against a map");
  vt->add_option("trace", trace_path, "trace csv file")->required();
  vt->add_option("map", map_path, "map file")->required();

  std::string stats_dir;
  CLI::App* st = app.add_subcommand(
      "stats", "recompute aggregate statistics from runs.csv");
  st->add_option("dir", stats_dir, "output directory of a previous run")
      ->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("covplan");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_args, out, err);
    if (vt->parsed()) return cmd_validate_trace(trace_path, map_path, out, err);
    return cmd_stats(stats_dir, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const MapParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace covplan::cli
