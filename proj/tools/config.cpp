#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace movosc::cli {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(line, "'" + std::string(key) + "' expects a finite number, got '" +
                                std::string(s) + "'");
  }
  return v;
}

template <typename Int = long long>
Int parse_integer(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(line, "'" + std::string(key) + "' expects an integer, got '" +
                                std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, int line, std::string_view key, int min_value) {
  const long long v = parse_integer(s, line, key);
  if (v < min_value || v > 1'000'000'000) {
    throw ConfigError(line, "'" + std::string(key) + "' must be an integer >= " +
                                std::to_string(min_value));
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError(line, "'" + std::string(key) + "' expects true/false, got '" +
                              std::string(s) + "'");
}

std::vector<double> parse_list(std::string_view s, int line, std::string_view key) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma), line, key));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string parse_choice(std::string_view s, int line, std::string_view key,
                         std::initializer_list<std::string_view> allowed) {
  s = trim(s);
  for (auto a : allowed) {
    if (s == a) return std::string(s);
  }
  std::string msg = "'" + std::string(key) + "' must be one of";
  for (auto a : allowed) msg += " " + std::string(a);
  throw ConfigError(line, msg + ", got '" + std::string(s) + "'");
}

using Setter = std::function<void(std::string_view value, int line)>;
using Section = std::map<std::string, Setter, std::less<>>;

std::map<std::string, Section, std::less<>> schema(ScenarioConfig& c) {
  auto num = [](double& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, int line) { field = parse_double(v, line, key); };
  };
  auto opt = [](std::optional<double>& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, int line) { field = parse_double(v, line, key); };
  };
  auto integer = [](int& field, const char* key, int min_value) -> Setter {
    return [&field, key, min_value](std::string_view v, int line) {
      field = parse_int(v, line, key, min_value);
    };
  };
  auto list = [](std::vector<double>& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, int line) { field = parse_list(v, line, key); };
  };
  auto& o = c.oscillator;
  auto& t = c.trajectory;
  auto& r = c.run;
  auto& s = c.sweep;
  auto& p = c.transport;

  std::map<std::string, Section, std::less<>> sections;
  sections["oscillator"] = {
      {"units",
       [&o](std::string_view v, int line) {
         o.dimensionless = parse_choice(v, line, "units", {"dimensionless", "si"}) ==
                           "dimensionless";
       }},
      {"mass", num(o.mass, "mass")},
      {"omega", num(o.omega, "omega")},
      {"hbar", num(o.hbar, "hbar")},
  };
  sections["trajectory"] = {
      {"family",
       [&t](std::string_view v, int line) {
         t.family = parse_choice(v, line, "family",
                                 {"stationary", "constant_acceleration", "kick", "sinusoidal",
                                  "circular", "polynomial", "piecewise_acceleration"});
       }},
      {"acceleration", num(t.acceleration, "acceleration")},
      {"velocity", num(t.velocity, "velocity")},
      {"radius", num(t.radius, "radius")},
      {"rotation", num(t.rotation, "rotation")},
      {"revolutions", num(t.revolutions, "revolutions")},
      {"duration", opt(t.duration, "duration")},
      {"duration_periods", opt(t.duration_periods, "duration_periods")},
      {"ramp", opt(t.ramp, "ramp")},
      {"ramp_periods", opt(t.ramp_periods, "ramp_periods")},
      {"stop_at", opt(t.stop_at, "stop_at")},
      {"coefficients", list(t.coefficients, "coefficients")},
      {"accelerations", list(t.accelerations, "accelerations")},
  };
  sections["run"] = {
      {"times", list(r.times, "times")},
      {"t_start", opt(r.t_start, "t_start")},
      {"t_stop", opt(r.t_stop, "t_stop")},
      {"t_count", integer(r.t_count, "t_count", 0)},
      {"periods", list(r.periods, "periods")},
      {"return_instants", list(r.return_instants, "return_instants")},
      {"axis_gamma", list(r.axis_gamma, "axis_gamma")},
      {"max_level", integer(r.max_level, "max_level", 0)},
      {"initial_level", integer(r.initial_level, "initial_level", 0)},
      {"tail_epsilon", num(r.tail_epsilon, "tail_epsilon")},
      {"convention",
       [&r](std::string_view v, int line) {
         r.convention = parse_choice(v, line, "convention", {"summed", "averaged"});
       }},
      {"scheme",
       [&r](std::string_view v, int line) {
         r.scheme = parse_choice(v, line, "scheme", {"simpson", "filon"});
       }},
      {"steps_per_period", integer(r.steps_per_period, "steps_per_period", 1)},
      {"oracle", [&r](std::string_view v, int line) { r.oracle = parse_bool(v, line, "oracle"); }},
      {"oracle_points", integer(r.oracle_points, "oracle_points", 1)},
      {"oracle_steps_per_period", integer(r.oracle_steps_per_period, "oracle_steps_per_period", 1)},
      {"oracle_bound", num(r.oracle_bound, "oracle_bound")},
  };
  sections["sweep"] = {
      {"parameter",
       [&s](std::string_view v, int line) {
         s.parameter = parse_choice(v, line, "parameter", {"Omega", "omega", "R", "v", "a", "s", "T"});
       }},
      {"values", list(s.values, "values")},
      {"start", opt(s.start, "start")},
      {"stop", opt(s.stop, "stop")},
      {"count", integer(s.count, "count", 0)},
  };
  sections["transport"] = {
      {"displacement", num(p.displacement, "displacement")},
      {"duration", opt(p.duration, "duration")},
      {"duration_periods", opt(p.duration_periods, "duration_periods")},
      {"family",
       [&p](std::string_view v, int line) {
         p.family = parse_choice(v, line, "family", {"polynomial", "piecewise_acceleration"});
       }},
      {"degree", integer(p.degree, "degree", 0)},
      {"segments", integer(p.segments, "segments", 0)},
      {"budget", integer(p.budget, "budget", 0)},
      {"threshold", num(p.threshold, "threshold")},
      {"max_restarts", integer(p.max_restarts, "max_restarts", 0)},
      {"seed",
       [&p](std::string_view v, int line) {
         if (trim(v).starts_with('-')) throw ConfigError(line, "'seed' must be non-negative");
         p.seed = parse_integer<unsigned long long>(v, line, "seed");
       }},
      {"samples", integer(p.samples, "samples", 2)},
  };
  return sections;
}

void check_exclusive(bool a, bool b, const char* first, const char* second, const char* section) {
  if (a && b) {
    throw ConfigError(0, std::string("[") + section + "] sets both '" + first + "' and '" +
                             second + "'");
  }
}

void check_consistency(const ScenarioConfig& c) {
  const auto& t = c.trajectory;
  check_exclusive(t.duration.has_value(), t.duration_periods.has_value(), "duration",
                  "duration_periods", "trajectory");
  check_exclusive(t.ramp.has_value(), t.ramp_periods.has_value(), "ramp", "ramp_periods",
                  "trajectory");
  check_exclusive(c.transport.duration.has_value(), c.transport.duration_periods.has_value(),
                  "duration", "duration_periods", "transport");
  const auto& r = c.run;
  if (r.t_start.has_value() != r.t_stop.has_value() || (r.t_start.has_value() && r.t_count < 1)) {
    throw ConfigError(0, "[run] t_start, t_stop and t_count must be given together");
  }
  const auto& s = c.sweep;
  if (s.start.has_value() != s.stop.has_value()) {
    throw ConfigError(0, "[sweep] start and stop must be given together");
  }
  if (!s.values.empty() && s.start.has_value()) {
    throw ConfigError(0, "[sweep] sets both 'values' and start/stop");
  }
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : format_number(v);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += shortest(values[i]);
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  const auto sections = schema(config);
  const Section* current = nullptr;
  std::string current_name;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;

  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    const auto comment = line.find_first_of("#;");
    line = trim(line.substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      const auto it = sections.find(name);
      if (it == sections.end()) throw ConfigError(line_no, "unknown section [" + name + "]");
      if (!seen_sections.insert(name).second) {
        throw ConfigError(line_no, "section [" + name + "] appears twice");
      }
      current = &it->second;
      current_name = name;
      if (name == "transport") config.transport.present = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (current == nullptr) throw ConfigError(line_no, "key '" + key + "' outside any section");
    const auto setter = current->find(key);
    if (setter == current->end()) {
      throw ConfigError(line_no, "unknown key '" + key + "' in [" + current_name + "]");
    }
    if (!seen_keys.insert(current_name + "." + key).second) {
      throw ConfigError(line_no, "duplicate key '" + key + "' in [" + current_name + "]");
    }
    setter->second(value, line_no);
  }
  check_consistency(config);
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto line = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) line(key, shortest(*v));
  };
  auto list = [&](const char* key, const std::vector<double>& v) {
    if (!v.empty()) line(key, join(v));
  };

  const auto& o = c.oscillator;
  out << "[oscillator]\n";
  line("units", o.dimensionless ? "dimensionless" : "si");
  line("mass", shortest(o.mass));
  line("omega", shortest(o.omega));
  line("hbar", shortest(o.hbar));

  const auto& t = c.trajectory;
  out << "\n[trajectory]\n";
  line("family", t.family);
  line("acceleration", shortest(t.acceleration));
  line("velocity", shortest(t.velocity));
  line("radius", shortest(t.radius));
  line("rotation", shortest(t.rotation));
  line("revolutions", shortest(t.revolutions));
  opt("duration", t.duration);
  opt("duration_periods", t.duration_periods);
  opt("ramp", t.ramp);
  opt("ramp_periods", t.ramp_periods);
  opt("stop_at", t.stop_at);
  list("coefficients", t.coefficients);
  list("accelerations", t.accelerations);

  const auto& r = c.run;
  out << "\n[run]\n";
  list("times", r.times);
  opt("t_start", r.t_start);
  opt("t_stop", r.t_stop);
  line("t_count", std::to_string(r.t_count));
  list("periods", r.periods);
  list("return_instants", r.return_instants);
  list("axis_gamma", r.axis_gamma);
  line("max_level", std::to_string(r.max_level));
  line("initial_level", std::to_string(r.initial_level));
  line("tail_epsilon", shortest(r.tail_epsilon));
  line("convention", r.convention);
  line("scheme", r.scheme);
  line("steps_per_period", std::to_string(r.steps_per_period));
  line("oracle", r.oracle ? "true" : "false");
  line("oracle_points", std::to_string(r.oracle_points));
  line("oracle_steps_per_period", std::to_string(r.oracle_steps_per_period));
  line("oracle_bound", shortest(r.oracle_bound));

  const auto& s = c.sweep;
  if (!s.parameter.empty() || !s.values.empty() || s.start) {
    out << "\n[sweep]\n";
    if (!s.parameter.empty()) line("parameter", s.parameter);
    list("values", s.values);
    opt("start", s.start);
    opt("stop", s.stop);
    line("count", std::to_string(s.count));
  }

  const auto& p = c.transport;
  if (p.present) {
    out << "\n[transport]\n";
    line("displacement", shortest(p.displacement));
    opt("duration", p.duration);
    opt("duration_periods", p.duration_periods);
    line("family", p.family);
    line("degree", std::to_string(p.degree));
    line("segments", std::to_string(p.segments));
    line("budget", std::to_string(p.budget));
    line("threshold", shortest(p.threshold));
    line("max_restarts", std::to_string(p.max_restarts));
    line("seed", std::to_string(p.seed));
    line("samples", std::to_string(p.samples));
  }
  return out.str();
}

std::vector<double> sweep_points(const SweepBlock& sweep) {
  if (!sweep.values.empty()) return sweep.values;
  std::vector<double> points;
  if (!sweep.start || sweep.count < 1) return points;
  if (sweep.count == 1) return {*sweep.start};
  const double step = (*sweep.stop - *sweep.start) / (sweep.count - 1);
  for (int i = 0; i < sweep.count; ++i) {
    points.push_back(i + 1 == sweep.count ? *sweep.stop : *sweep.start + i * step);
  }
  return points;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace movosc::cli
