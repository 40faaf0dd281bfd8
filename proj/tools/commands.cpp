#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "movosc/movosc.h"

namespace movosc::cli {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Params = std::unique_ptr<movosc_params, Deleter<movosc_params, movosc_params_destroy>>;
using Trajectory =
    std::unique_ptr<movosc_trajectory, Deleter<movosc_trajectory, movosc_trajectory_destroy>>;
using State = std::unique_ptr<movosc_state, Deleter<movosc_state, movosc_state_destroy>>;
using Solution = std::unique_ptr<movosc_transport_solution,
                                 Deleter<movosc_transport_solution,
                                         movosc_transport_solution_destroy>>;

int exit_code_for(movosc_status status) {
  switch (status) {
    case MOVOSC_ERR_INVALID_ARGUMENT:
    case MOVOSC_ERR_RANGE:
    case MOVOSC_ERR_NULL_POINTER:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

void check(movosc_status status) {
  if (status != MOVOSC_OK) {
    throw CommandError(exit_code_for(status),
                       std::string(movosc_status_name(status)) + ": " + movosc_last_error());
  }
}

[[noreturn]] void config_error(const std::string& message) {
  throw CommandError(kExitConfig, message);
}

std::string na_or(std::optional<double> v) { return v ? format_number(*v) : "NA"; }

Params make_params(const OscillatorBlock& o, std::optional<double> omega_override = {}) {
  movosc_params* raw = nullptr;
  const double omega = omega_override.value_or(o.omega);
  if (o.dimensionless) {
    if (o.mass != 1.0 || (o.hbar != 0.0 && o.hbar != 1.0)) {
      config_error("dimensionless units fix mass = hbar = 1; use units = si for other values");
    }
    check(movosc_params_create_dimensionless(&raw));
    Params base(raw);
    if (omega == 1.0) return base;
    check(movosc_params_with_omega(base.get(), omega, &raw));
    return Params(raw);
  }
  check(movosc_params_create_si(o.mass, omega, o.hbar, &raw));
  return Params(raw);
}

double param_omega(const movosc_params* p) {
  double omega = 0.0;
  check(movosc_params_get(p, nullptr, &omega, nullptr, nullptr));
  return omega;
}

movosc_quadrature quadrature(const RunBlock& run, bool phase) {
  movosc_quadrature q = movosc_quadrature_default();
  q.steps_per_period = run.steps_per_period;
  q.scheme = run.scheme == "filon" ? MOVOSC_SCHEME_COMPOSITE_FILON : MOVOSC_SCHEME_ADAPTIVE_SIMPSON;
  q.compute_phase = phase;
  return q;
}

double seconds(const std::optional<double>& value, const std::optional<double>& periods,
               double omega, const char* name) {
  if (value) return *value;
  if (periods) return *periods * kTwoPi / omega;
  config_error(std::string("[trajectory] needs '") + name + "' or '" + name + "_periods'");
}

Trajectory make_trajectory(const TrajectoryBlock& t, double omega) {
  movosc_trajectory* raw = nullptr;
  const std::string& f = t.family;
  if (f == "circular") {
    const double ramp = seconds(t.ramp, t.ramp_periods, omega, "ramp");
    check(movosc_make_circular(t.radius, t.rotation, ramp, t.revolutions, &raw));
    return Trajectory(raw);
  }
  const double duration = seconds(t.duration, t.duration_periods, omega, "duration");
  if (f == "stationary") {
    check(movosc_make_constant_acceleration(0.0, duration, &raw));
  } else if (f == "constant_acceleration") {
    check(movosc_make_constant_acceleration(t.acceleration, duration, &raw));
  } else if (f == "kick") {
    const double ramp = seconds(t.ramp, t.ramp_periods, omega, "ramp");
    check(movosc_make_kick(t.velocity, ramp, duration, t.stop_at.has_value(),
                           t.stop_at.value_or(0.0), &raw));
  } else if (f == "sinusoidal") {
    check(movosc_make_sinusoidal(t.radius, t.rotation, duration, &raw));
  } else if (f == "polynomial") {
    check(movosc_make_polynomial(t.coefficients.data(), t.coefficients.size(), duration, &raw));
  } else if (f == "piecewise_acceleration") {
    check(movosc_make_piecewise_acceleration(t.accelerations.data(), t.accelerations.size(),
                                             duration, &raw));
  } else {
    config_error("unknown trajectory family '" + f + "'");
  }
  return Trajectory(raw);
}

struct Scenario {
  Params params;
  Trajectory traj;
  double omega = 1.0;
  double duration = 0.0;
  int dimension = 1;
};

Scenario make_scenario(const ScenarioConfig& c, std::ostream& diag) {
  Scenario s;
  s.params = make_params(c.oscillator);
  s.omega = param_omega(s.params.get());
  s.traj = make_trajectory(c.trajectory, s.omega);
  s.duration = movosc_trajectory_duration(s.traj.get());
  s.dimension = movosc_trajectory_dimension(s.traj.get());
  for (std::size_t i = 0; i < movosc_trajectory_warning_count(s.traj.get()); ++i) {
    diag << "warning: " << movosc_trajectory_warning(s.traj.get(), i) << "\n";
  }
  return s;
}

std::vector<double> resolve_times(const ScenarioConfig& c, double omega, double duration) {
  const RunBlock& r = c.run;
  std::vector<double> times = r.times;
  if (r.t_start) {
    if (r.t_count == 1) {
      times.push_back(*r.t_start);
    } else {
      const double step = (*r.t_stop - *r.t_start) / (r.t_count - 1);
      for (int i = 0; i < r.t_count; ++i) {
        times.push_back(i + 1 == r.t_count ? *r.t_stop : *r.t_start + i * step);
      }
    }
  }
  for (double k : r.periods) times.push_back(k * kTwoPi / omega);
  if (!r.return_instants.empty()) {
    const auto& f = c.trajectory.family;
    if ((f != "sinusoidal" && f != "circular") || !(c.trajectory.rotation > 0.0)) {
      config_error("return_instants need a sinusoidal or circular trajectory with rotation > 0");
    }
    for (double s : r.return_instants) times.push_back(s * kTwoPi / c.trajectory.rotation);
  }
  if (times.empty()) times.push_back(duration);
  return times;
}

std::optional<double> closed_form(const TrajectoryBlock& t, const movosc_params* p, double tt,
                                  double duration, double omega) {
  double v = 0.0;
  const std::string& f = t.family;
  if (f == "stationary") return 0.0;
  if (f == "constant_acceleration") {
    check(movosc_closed_form_constant_accel(t.acceleration, p, tt, &v));
    return v;
  }
  if (f == "kick") {
    const double ramp = seconds(t.ramp, t.ramp_periods, omega, "ramp");
    if (t.stop_at) {
      if (tt < *t.stop_at + ramp) return std::nullopt;
      check(movosc_closed_form_kick_stop(t.velocity, p, *t.stop_at, &v));
      return v;
    }
    if (tt < ramp) return std::nullopt;
    check(movosc_closed_form_kick_G(t.velocity, p, &v));
    return v;
  }
  if (f == "sinusoidal") {
    check(movosc_closed_form_sinusoidal(t.radius, t.rotation, p, tt, &v));
    return v;
  }
  if (f == "circular" && tt == duration) {
    check(movosc_closed_form_circular(t.radius, t.rotation, p, t.revolutions, &v));
    return v;
  }
  return std::nullopt;
}

std::vector<double> axis_gammas(const Scenario& s, double t, const movosc_quadrature& q) {
  std::vector<double> g;
  for (int axis = 0; axis < s.dimension; ++axis) {
    movosc_excitation e{};
    check(movosc_excitation_amplitude(s.traj.get(), axis, s.params.get(), t, &q, &e));
    g.push_back(e.gamma);
  }
  return g;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void probability_header(std::vector<std::string>& header, int max_level) {
  for (int n = 0; n <= max_level; ++n) header.push_back("P" + std::to_string(n));
}

}  // namespace

int cmd_excite(const ScenarioConfig& c, std::ostream& out, std::ostream& diag) {
  const Scenario s = make_scenario(c, diag);
  const auto q = quadrature(c.run, true);
  const bool multi = s.dimension > 1;
  std::vector<std::string> header{"t"};
  if (multi) header.push_back("axis");
  header.insert(header.end(), {"re_u", "im_u", "gamma", "phi", "delta_sq"});
  write_row(out, header);

  for (double t : resolve_times(c, s.omega, s.duration)) {
    for (int axis = 0; axis < s.dimension; ++axis) {
      movosc_excitation e{};
      check(movosc_excitation_amplitude(s.traj.get(), axis, s.params.get(), t, &q, &e));
      double dre = 0.0, dim = 0.0;
      check(movosc_fixed_frame_delta(s.traj.get(), axis, s.params.get(), t, &q, &dre, &dim));
      std::vector<std::string> row{format_number(t)};
      if (multi) row.push_back(std::to_string(axis));
      row.insert(row.end(),
                 {format_number(e.u_re), format_number(e.u_im), format_number(e.gamma),
                  e.phi_valid ? format_number(e.phi) : "NA",
                  format_number(dre * dre + dim * dim)});
      write_row(out, row);
    }
  }
  return kExitOk;
}

int cmd_probs(const ScenarioConfig& c, std::ostream& out, std::ostream& diag) {
  const RunBlock& r = c.run;
  struct Point {
    std::optional<double> t;
    std::vector<double> gamma;
    std::optional<double> closed;
  };
  std::vector<Point> points;
  if (!r.axis_gamma.empty()) {
    points.push_back({std::nullopt, r.axis_gamma, std::nullopt});
  } else {
    const Scenario s = make_scenario(c, diag);
    const auto q = quadrature(r, false);
    for (double t : resolve_times(c, s.omega, s.duration)) {
      std::optional<double> closed;
      if (s.dimension > 1) closed = closed_form(c.trajectory, s.params.get(), t, s.duration, s.omega);
      points.push_back({t, axis_gammas(s, t, q), closed});
    }
  }
  const int levels = r.max_level;
  const bool multi = points.front().gamma.size() > 1;
  const auto convention =
      r.convention == "averaged" ? MOVOSC_DEGENERACY_AVERAGED : MOVOSC_DEGENERACY_SUMMED;

  std::vector<std::string> header{"t"};
  if (multi) {
    header.insert(header.end(), {"w", "w_closed_form", "m"});
  } else {
    header.insert(header.end(), {"gamma", "m"});
  }
  probability_header(header, levels);
  header.push_back("row_sum");
  if (!multi) header.insert(header.end(), {"missing_mass", "levels_for_epsilon"});
  write_row(out, header);

  for (const Point& pt : points) {
    double w = 0.0;
    for (double g : pt.gamma) w += g;
    for (int m = 0; m <= levels; ++m) {
      std::vector<std::string> row{na_or(pt.t), format_number(w)};
      if (multi) row.push_back(na_or(pt.closed));
      row.push_back(std::to_string(m));
      double sum = 0.0;
      for (int n = 0; n <= levels; ++n) {
        double p = 0.0;
        if (multi) {
          check(movosc_degenerate_probability(m, n, pt.gamma.data(), pt.gamma.size(), convention,
                                              &p));
        } else {
          check(movosc_transition_probability(m, n, w, &p));
        }
        sum += p;
        row.push_back(format_number(p));
      }
      row.push_back(format_number(sum));
      if (!multi) {
        std::size_t length = 0;
        const movosc_status st =
            movosc_transition_row(m, w, r.tail_epsilon, nullptr, 0, &length, nullptr, nullptr);
        if (st != MOVOSC_ERR_BUFFER_TOO_SMALL && st != MOVOSC_OK) check(st);
        row.push_back(format_number(std::max(0.0, 1.0 - sum)));
        row.push_back(std::to_string(length));
      }
      write_row(out, row);
    }
  }
  return kExitOk;
}

int cmd_oracle(const ScenarioConfig& c, std::ostream& out, std::ostream& diag) {
  const RunBlock& r = c.run;
  if (!r.oracle) config_error("oracle is disabled; set oracle = true in [run]");
  const Scenario s = make_scenario(c, diag);
  if (s.dimension != 1) config_error("the oracle handles one-dimensional trajectories only");

  std::vector<double> times = resolve_times(c, s.omega, s.duration);
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0) config_error("oracle times must be non-negative");
  const int m = r.initial_level;
  const int n_max = std::max(r.max_level, m);

  movosc_grid_spec grid{};
  check(movosc_grid_for_trajectory(s.traj.get(), 0, s.params.get(), times.back(), n_max,
                                   static_cast<std::size_t>(r.oracle_points), &grid));
  double b0 = 0.0, v0 = 0.0;
  check(movosc_trajectory_eval(s.traj.get(), 0, 0.0, &b0, &v0, nullptr));
  movosc_state* raw = nullptr;
  check(movosc_fock_state(m, b0, v0, s.params.get(), &grid, &raw));
  State state(raw);

  movosc_propagation pc = movosc_propagation_default();
  pc.steps_per_period = r.oracle_steps_per_period;
  const auto q = quadrature(r, false);

  write_row(out, {"t", "n", "analytic", "oracle", "abs_deviation"});
  double max_dev = 0.0;
  double max_drift = 0.0;
  std::vector<double> probs(static_cast<std::size_t>(n_max) + 1);
  std::vector<std::string> fixed_frame;
  for (double t : times) {
    double drift = 0.0;
    check(movosc_propagate(state.get(), s.traj.get(), 0, s.params.get(), t, &pc, &raw, &drift));
    state.reset(raw);
    max_drift = std::max(max_drift, drift);
    int truncated = 0;
    check(movosc_measure_transitions(state.get(), s.traj.get(), 0, s.params.get(), n_max,
                                     probs.data(), &truncated));
    if (truncated) diag << "warning: Fock basis truncated at t = " << format_number(t) << "\n";

    movosc_excitation e{};
    check(movosc_excitation_amplitude(s.traj.get(), 0, s.params.get(), t, &q, &e));
    for (int n = 0; n <= n_max; ++n) {
      double p = 0.0;
      check(movosc_transition_probability(m, n, e.gamma, &p));
      const double dev = std::abs(p - probs[static_cast<std::size_t>(n)]);
      max_dev = std::max(max_dev, dev);
      write_row(out, {format_number(t), std::to_string(n), format_number(p),
                      format_number(probs[static_cast<std::size_t>(n)]), format_number(dev)});
    }
    double dre = 0.0, dim = 0.0;
    check(movosc_fixed_frame_delta(s.traj.get(), 0, s.params.get(), t, &q, &dre, &dim));
    const double delta_sq = dre * dre + dim * dim;
    fixed_frame.push_back("summary: t = " + format_number(t) + " |delta|^2 = " +
                          format_number(delta_sq) + " |u|^2 = " + format_number(e.gamma) +
                          " difference = " + format_number(std::abs(delta_sq - e.gamma)));
  }
  for (const auto& line : fixed_frame) diag << line << "\n";
  diag << "summary: max_abs_deviation = " << format_number(max_dev)
       << " bound = " << format_number(r.oracle_bound)
       << " max_norm_drift = " << format_number(max_drift) << "\n";
  if (max_dev > r.oracle_bound) {
    diag << "error: oracle deviation exceeds the configured bound\n";
    return kExitOracleMismatch;
  }
  return kExitOk;
}

int cmd_sweep(const ScenarioConfig& c, std::ostream& out, std::ostream& diag) {
  const SweepBlock& sw = c.sweep;
  if (sw.parameter.empty()) config_error("[sweep] needs 'parameter'");
  const std::string& f = c.trajectory.family;
  if ((sw.parameter == "s" && f != "sinusoidal" && f != "circular") ||
      (sw.parameter == "T" && f == "circular")) {
    config_error("sweep parameter '" + sw.parameter + "' does not apply to family '" + f + "'");
  }
  // Validates the base scenario and reports its warnings once.
  const Scenario base = make_scenario(c, diag);
  const std::vector<double> points = sweep_points(sw);

  struct Row {
    double excitation = 0.0;
    std::optional<double> closed;
  };
  std::vector<Row> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());

  auto evaluate = [&](std::size_t i) {
    const double x = points[i];
    TrajectoryBlock t = c.trajectory;
    std::optional<double> omega_override;
    const std::string& p = sw.parameter;
    if (p == "Omega") t.rotation = x;
    if (p == "omega") omega_override = x;
    if (p == "R") t.radius = x;
    if (p == "v") t.velocity = x;
    if (p == "a") t.acceleration = x;
    if (p == "T") {
      t.duration = x;
      t.duration_periods.reset();
    }
    if (p == "s") {
      if (f == "circular") {
        t.revolutions = x;
      } else {
        t.duration = x * kTwoPi / t.rotation;
        t.duration_periods.reset();
      }
    }
    const Params params = make_params(c.oscillator, omega_override);
    const double omega = param_omega(params.get());
    const Trajectory traj = make_trajectory(t, omega);
    const double duration = movosc_trajectory_duration(traj.get());
    const auto q = quadrature(c.run, false);
    check(movosc_total_excitation(traj.get(), params.get(), duration, &q, &rows[i].excitation));
    rows[i].closed = closed_form(t, params.get(), duration, duration, omega);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        evaluate(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(points.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  write_row(out, {sw.parameter, base.dimension > 1 ? "w" : "gamma", "closed_form"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    write_row(out, {format_number(points[i]), format_number(rows[i].excitation),
                    na_or(rows[i].closed)});
  }
  return kExitOk;
}

int cmd_transport(const ScenarioConfig& c, std::ostream& out, std::ostream& diag) {
  const TransportBlock& tb = c.transport;
  if (!tb.present) config_error("missing [transport] section");
  const Params params = make_params(c.oscillator);
  const double omega = param_omega(params.get());
  double duration = 0.0;
  if (tb.duration) {
    duration = *tb.duration;
  } else if (tb.duration_periods) {
    duration = *tb.duration_periods * kTwoPi / omega;
  } else {
    config_error("[transport] needs 'duration' or 'duration_periods'");
  }

  movosc_transport_spec spec{tb.displacement, duration,
                             tb.family == "piecewise_acceleration"
                                 ? MOVOSC_TRANSPORT_PIECEWISE_ACCELERATION
                                 : MOVOSC_TRANSPORT_POLYNOMIAL,
                             tb.degree, tb.segments};
  movosc_optimizer opt = movosc_optimizer_default();
  opt.budget = tb.budget;
  opt.threshold = tb.threshold;
  opt.max_restarts = tb.max_restarts;
  opt.seed = tb.seed;

  movosc_transport_solution* raw = nullptr;
  check(movosc_transport_optimize(&spec, params.get(), nullptr, 0, &opt, &raw));
  const Solution sol(raw);

  std::size_t length = 0;
  const movosc_status st = movosc_transport_coefficients(sol.get(), nullptr, 0, &length);
  if (st != MOVOSC_ERR_BUFFER_TOO_SMALL) check(st);
  std::vector<double> coeffs(length);
  check(movosc_transport_coefficients(sol.get(), coeffs.data(), coeffs.size(), &length));

  diag << "coefficients =";
  for (std::size_t i = 0; i < coeffs.size(); ++i) diag << (i ? ", " : " ") << format_number(coeffs[i]);
  diag << "\nresidual = " << format_number(movosc_transport_residual(sol.get()))
       << "\nevaluations = " << movosc_transport_evaluations(sol.get())
       << "\nconverged = " << (movosc_transport_converged(sol.get()) ? "true" : "false")
       << "\nconstraints_satisfied = "
       << (movosc_transport_constraints_satisfied(sol.get()) ? "true" : "false") << "\n";
  if (!movosc_transport_converged(sol.get())) {
    diag << "warning: residual did not reach the threshold " << format_number(tb.threshold)
         << "\n";
  }

  const movosc_trajectory* traj = movosc_transport_trajectory(sol.get());
  write_row(out, {"t", "position", "velocity", "acceleration"});
  for (int i = 0; i < tb.samples; ++i) {
    const double t = i + 1 == tb.samples ? duration : duration * i / (tb.samples - 1);
    double b = 0.0, v = 0.0, a = 0.0;
    check(movosc_trajectory_eval(traj, 0, t, &b, &v, &a));
    write_row(out, {format_number(t), format_number(b), format_number(v), format_number(a)});
  }
  return kExitOk;
}

}  // namespace movosc::cli
