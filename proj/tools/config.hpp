#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace movosc::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  /// 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct OscillatorBlock {
  bool dimensionless = true;
  double mass = 1.0;
  double omega = 1.0;
  /// 0 selects the CODATA value in SI mode.
  double hbar = 0.0;
};

struct TrajectoryBlock {
  /// stationary | constant_acceleration | kick | sinusoidal | circular |
  /// polynomial | piecewise_acceleration
  std::string family = "stationary";
  double acceleration = 0.0;
  double velocity = 0.0;
  double radius = 0.0;
  double rotation = 0.0;
  double revolutions = 1.0;
  /// Either seconds or oscillator periods; at most one of each pair is set.
  std::optional<double> duration;
  std::optional<double> duration_periods;
  std::optional<double> ramp;
  std::optional<double> ramp_periods;
  std::optional<double> stop_at;
  std::vector<double> coefficients;
  std::vector<double> accelerations;
};

struct RunBlock {
  std::vector<double> times;
  std::optional<double> t_start;
  std::optional<double> t_stop;
  int t_count = 0;
  std::vector<double> periods;
  std::vector<double> return_instants;
  std::vector<double> axis_gamma;
  int max_level = 10;
  int initial_level = 0;
  double tail_epsilon = 1e-12;
  std::string convention = "summed";
  std::string scheme = "simpson";
  int steps_per_period = 64;
  bool oracle = false;
  int oracle_points = 4096;
  int oracle_steps_per_period = 2000;
  double oracle_bound = 1e-3;
};

struct SweepBlock {
  /// Omega | omega | R | v | a | s | T; empty when the block is absent.
  std::string parameter;
  std::vector<double> values;
  std::optional<double> start;
  std::optional<double> stop;
  int count = 0;
};

struct TransportBlock {
  bool present = false;
  double displacement = 0.0;
  std::optional<double> duration;
  std::optional<double> duration_periods;
  std::string family = "polynomial";
  int degree = 5;
  int segments = 4;
  int budget = 2000;
  double threshold = 1e-8;
  int max_restarts = 5;
  unsigned long long seed = 0;
  int samples = 101;
};

struct ScenarioConfig {
  OscillatorBlock oscillator;
  TrajectoryBlock trajectory;
  RunBlock run;
  SweepBlock sweep;
  TransportBlock transport;
};

/// Flat `key = value` lines under [oscillator], [trajectory], [run], [sweep]
/// and [transport] headers. `#` and `;` start comments. Lists are
/// comma-separated. Unknown sections or keys, duplicates and malformed values
/// raise ConfigError with the offending line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Renders every field (defaults included) in the same format, so that
/// parse_config(render_config(c)) reproduces c.
std::string render_config(const ScenarioConfig& config);

/// Sweep points from either `values` or start/stop/count (inclusive ends).
std::vector<double> sweep_points(const SweepBlock& sweep);

/// "%.12g", the fixed format for every number written by the CLI.
std::string format_number(double value);

}  // namespace movosc::cli
