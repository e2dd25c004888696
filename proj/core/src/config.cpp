#include "covplan/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "covplan/errors.hpp"

namespace covplan {

const char* to_string(ClockKind k) {
  return k == ClockKind::Virtual ? "virtual" : "wall";
}

const char* to_string(MissionMode m) {
  return m == MissionMode::Concurrent ? "concurrent" : "synchronous";
}

const char* to_string(PlannerModel p) {
  return p == PlannerModel::Instant ? "instant" : "fixed";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + value +
                      "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-')
      throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key +
                      "': not an unsigned integer: '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + value +
                    "'");
}

}  // namespace

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  if (key == "map") {
    map = value;
  } else if (key == "width") {
    width = static_cast<int>(parse_int(key, value));
  } else if (key == "height") {
    height = static_cast<int>(parse_int(key, value));
  } else if (key == "density") {
    density = parse_double(key, value);
  } else if (key == "robots") {
    robots = static_cast<int>(parse_int(key, value));
  } else if (key == "kind") {
    if (value == "holonomic")
      kind = RobotKind::Holonomic;
    else if (value == "diffdrive")
      kind = RobotKind::DifferentialDrive;
    else
      throw ConfigError("config key 'kind': unknown robot kind '" + value +
                        "' (holonomic, diffdrive)");
  } else if (key == "seed") {
    seed = parse_uint(key, value);
  } else if (key == "mode") {
    if (value == "concurrent")
      mode = MissionMode::Concurrent;
    else if (value == "synchronous")
      mode = MissionMode::Synchronous;
    else
      throw ConfigError("config key 'mode': unknown mode '" + value +
                        "' (concurrent, synchronous)");
  } else if (key == "clock") {
    if (value == "virtual")
      clock = ClockKind::Virtual;
    else if (value == "wall")
      clock = ClockKind::Wall;
    else
      throw ConfigError("config key 'clock': unknown clock '" + value +
                        "' (virtual, wall)");
  } else if (key == "planner") {
    if (value == "instant")
      planner = PlannerModel::Instant;
    else if (value == "fixed")
      planner = PlannerModel::Fixed;
    else
      throw ConfigError("config key 'planner': unknown model '" + value +
                        "' (instant, fixed)");
  } else if (key == "planner_intervals") {
    planner_intervals = static_cast<int>(parse_int(key, value));
  } else if (key == "transport_delay") {
    transport_delay = static_cast<int>(parse_int(key, value));
  } else if (key == "tau_ms") {
    tau_ms = parse_int(key, value);
  } else if (key == "bias_ms") {
    bias_ms = parse_int(key, value);
  } else if (key == "repeats") {
    repeats = static_cast<int>(parse_int(key, value));
  } else if (key == "jobs") {
    jobs = static_cast<int>(parse_int(key, value));
  } else if (key == "output_dir") {
    output_dir = value;
  } else if (key == "emit_trace") {
    emit_trace = parse_bool(key, value);
  } else if (key == "emit_round_log") {
    emit_round_log = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ScenarioConfig::validate() const {
  if (map == "random") {
    if (width < 2 || height < 2)
      throw ConfigError("random workspace needs width and height >= 2");
    if (density < 0.0 || density > 0.9)
      throw ConfigError("obstacle density must be within [0, 0.9]");
  }
  if (robots < 1) throw ConfigError("robots must be >= 1");
  if (tau_ms < 1) throw ConfigError("tau_ms must be >= 1");
  if (bias_ms < 0) throw ConfigError("bias_ms must be >= 0");
  if (planner_intervals < 0)
    throw ConfigError("planner_intervals must be >= 0");
  if (planner == PlannerModel::Fixed && clock == ClockKind::Wall)
    throw ConfigError("the fixed planner model applies to the virtual clock");
  if (transport_delay < 0) throw ConfigError("transport_delay must be >= 0");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

namespace {

ScenarioConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  ScenarioConfig c;
  bool bias_given = false;
  for (const auto& [key, value] : j.items()) {
    const std::string v =
        value.is_string() ? value.get<std::string>() : value.dump();
    c.set(key, v);
    if (key == "bias_ms") bias_given = true;
  }
  if (!bias_given && c.clock == ClockKind::Wall) c.bias_ms = 50;
  return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos &&
      (text[first] == '{' || text[first] == '['))
    return parse_json_config(text);

  ScenarioConfig c;
  bool bias_given = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    c.set(key, value);
    if (key == "bias_ms") bias_given = true;
  }
  // Wall missions plan against a real clock; give them a safety margin
  // unless one was chosen explicitly.
  if (!bias_given && c.clock == ClockKind::Wall) c.bias_ms = 50;
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string print_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "map = " << c.map << '\n';
  os << "width = " << c.width << '\n';
  os << "height = " << c.height << '\n';
  os << "density = " << std::setprecision(17) << c.density << '\n';
  os << "robots = " << c.robots << '\n';
  os << "kind = " << to_string(c.kind) << '\n';
  os << "seed = " << c.seed << '\n';
  os << "mode = " << to_string(c.mode) << '\n';
  os << "clock = " << to_string(c.clock) << '\n';
  os << "planner = " << to_string(c.planner) << '\n';
  os << "planner_intervals = " << c.planner_intervals << '\n';
  os << "transport_delay = " << c.transport_delay << '\n';
  os << "tau_ms = " << c.tau_ms << '\n';
  os << "bias_ms = " << c.bias_ms << '\n';
  os << "repeats = " << c.repeats << '\n';
  os << "jobs = " << c.jobs << '\n';
  os << "output_dir = " << c.output_dir << '\n';
  os << "emit_trace = " << (c.emit_trace ? "true" : "false") << '\n';
  os << "emit_round_log = " << (c.emit_round_log ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace covplan
