#include "movosc/movosc.h"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "movosc/errors.hpp"
#include "movosc/excitation.hpp"
#include "movosc/model.hpp"
#include "movosc/oracle.hpp"
#include "movosc/transitions.hpp"
#include "movosc/transport.hpp"

struct movosc_params {
  movosc::OscillatorParams p;
};

struct movosc_trajectory {
  movosc::Trajectory t;
};

struct movosc_state {
  movosc::oracle::GridState s;
};

struct movosc_transport_solution {
  movosc::TransportSolution sol;
  movosc_trajectory traj;
  bool satisfied;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {
  const char* what;
};

movosc_status fail(movosc_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <class F>
movosc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MOVOSC_OK;
  } catch (const NullArgument& e) {
    return fail(MOVOSC_ERR_NULL_POINTER, e.what);
  } catch (const movosc::InvalidArgument& e) {
    return fail(MOVOSC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const movosc::RangeError& e) {
    return fail(MOVOSC_ERR_RANGE, e.what());
  } catch (const movosc::NumericalError& e) {
    return fail(MOVOSC_ERR_NUMERICAL, e.what());
  } catch (const movosc::ResourceError& e) {
    return fail(MOVOSC_ERR_RESOURCE, e.what());
  } catch (const movosc::SingularCaseError& e) {
    return fail(MOVOSC_ERR_SINGULAR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MOVOSC_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(MOVOSC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MOVOSC_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
T& need(T* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return *p;
}

template <class T>
const T& need(const T* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return *p;
}

movosc::QuadratureConfig to_config(const movosc_quadrature* q) {
  movosc::QuadratureConfig cfg;
  if (q != nullptr) {
    cfg.steps_per_period = q->steps_per_period;
    cfg.scheme = q->scheme == MOVOSC_SCHEME_COMPOSITE_FILON
                     ? movosc::QuadratureScheme::composite_filon
                     : movosc::QuadratureScheme::adaptive_simpson;
    cfg.tolerance = q->tolerance;
    cfg.compute_phase = q->compute_phase != 0;
  }
  return cfg;
}

movosc::oracle::Grid to_grid(const movosc_grid_spec* g) {
  const auto& spec = need(g, "grid");
  return movosc::oracle::Grid(spec.x_min, spec.x_max, spec.points);
}

void put_trajectory(movosc_trajectory** out, movosc::Trajectory&& t) {
  need(out, "out");
  *out = new movosc_trajectory{std::move(t)};
}

void copy_out(const std::vector<double>& values, double* dst, std::size_t capacity,
              std::size_t* length, movosc_status& status) {
  need(length, "length");
  *length = values.size();
  if (capacity < values.size()) {
    status = MOVOSC_ERR_BUFFER_TOO_SMALL;
    return;
  }
  if (!values.empty()) need(dst, "output buffer");
  std::copy(values.begin(), values.end(), dst);
}

}  // namespace

extern "C" {

const char* movosc_last_error(void) { return g_last_error.c_str(); }

const char* movosc_status_name(movosc_status status) {
  switch (status) {
    case MOVOSC_OK: return "ok";
    case MOVOSC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MOVOSC_ERR_RANGE: return "out of range";
    case MOVOSC_ERR_NUMERICAL: return "numerical failure";
    case MOVOSC_ERR_RESOURCE: return "resource limit";
    case MOVOSC_ERR_SINGULAR: return "singular case";
    case MOVOSC_ERR_NULL_POINTER: return "null pointer";
    case MOVOSC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case MOVOSC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* movosc_version(void) { return "1.0.0"; }

// Parameters ---------------------------------------------------------------

movosc_status movosc_params_create_dimensionless(movosc_params** out) {
  return guarded([&] {
    need(out, "out");
    *out = new movosc_params{movosc::OscillatorParams::dimensionless()};
  });
}

movosc_status movosc_params_create_si(double mass, double omega, double hbar,
                                      movosc_params** out) {
  return guarded([&] {
    need(out, "out");
    const double h = hbar > 0.0 ? hbar : movosc::kCodataHbar;
    *out = new movosc_params{movosc::OscillatorParams::si(mass, omega, h)};
  });
}

movosc_status movosc_params_with_omega(const movosc_params* params, double omega,
                                       movosc_params** out) {
  return guarded([&] {
    const auto& p = need(params, "params");
    need(out, "out");
    *out = new movosc_params{p.p.with_omega(omega)};
  });
}

void movosc_params_destroy(movosc_params* params) { delete params; }

movosc_status movosc_params_get(const movosc_params* params, double* mass, double* omega,
                                double* hbar, int* dimensionless) {
  return guarded([&] {
    const auto& p = need(params, "params").p;
    if (mass) *mass = p.mass();
    if (omega) *omega = p.omega();
    if (hbar) *hbar = p.hbar();
    if (dimensionless) *dimensionless = p.units() == movosc::UnitsMode::dimensionless;
  });
}

// Trajectories -------------------------------------------------------------

movosc_status movosc_make_constant_acceleration(double a, double duration,
                                                movosc_trajectory** out) {
  return guarded([&] { put_trajectory(out, movosc::make_constant_acceleration(a, duration)); });
}

movosc_status movosc_make_kick(double v, double ramp, double duration, int has_stop,
                               double stop_at, movosc_trajectory** out) {
  return guarded([&] {
    std::optional<double> stop;
    if (has_stop) stop = stop_at;
    put_trajectory(out, movosc::make_kick(v, ramp, duration, stop));
  });
}

movosc_status movosc_make_sinusoidal(double R, double Omega, double duration,
                                     movosc_trajectory** out) {
  return guarded([&] { put_trajectory(out, movosc::make_sinusoidal(R, Omega, duration)); });
}

movosc_status movosc_make_circular(double R, double Omega, double ramp, double revolutions,
                                   movosc_trajectory** out) {
  return guarded(
      [&] { put_trajectory(out, movosc::make_circular(R, Omega, ramp, revolutions)); });
}

movosc_status movosc_make_polynomial(const double* coeffs, size_t count, double duration,
                                     movosc_trajectory** out) {
  return guarded([&] {
    if (count > 0) need(coeffs, "coeffs");
    std::vector<double> c(coeffs, coeffs + count);
    put_trajectory(out, movosc::make_polynomial(std::move(c), duration));
  });
}

movosc_status movosc_make_piecewise_acceleration(const double* accelerations, size_t count,
                                                 double duration, movosc_trajectory** out) {
  return guarded([&] {
    if (count > 0) need(accelerations, "accelerations");
    std::vector<double> a(accelerations, accelerations + count);
    put_trajectory(out, movosc::make_piecewise_acceleration(std::move(a), duration));
  });
}

void movosc_trajectory_destroy(movosc_trajectory* traj) { delete traj; }

int movosc_trajectory_dimension(const movosc_trajectory* traj) {
  return traj ? traj->t.dimension() : 0;
}

double movosc_trajectory_duration(const movosc_trajectory* traj) {
  return traj ? traj->t.duration() : 0.0;
}

movosc_status movosc_trajectory_eval(const movosc_trajectory* traj, int axis, double t,
                                     double* position, double* velocity,
                                     double* acceleration) {
  return guarded([&] {
    const auto k = need(traj, "trajectory").t.eval(t, axis);
    if (position) *position = k.position;
    if (velocity) *velocity = k.velocity;
    if (acceleration) *acceleration = k.acceleration;
  });
}

movosc_status movosc_trajectory_boundary_flags(const movosc_trajectory* traj, int axis,
                                               int* zero_position, int* zero_velocity) {
  return guarded([&] {
    const auto f = need(traj, "trajectory").t.boundary_flags(axis);
    if (zero_position) *zero_position = f.zero_position;
    if (zero_velocity) *zero_velocity = f.zero_velocity;
  });
}

size_t movosc_trajectory_warning_count(const movosc_trajectory* traj) {
  return traj ? traj->t.warnings().size() : 0;
}

const char* movosc_trajectory_warning(const movosc_trajectory* traj, size_t index) {
  if (traj == nullptr || index >= traj->t.warnings().size()) return nullptr;
  return traj->t.warnings()[index].c_str();
}

// Excitation ---------------------------------------------------------------

movosc_quadrature movosc_quadrature_default(void) {
  const movosc::QuadratureConfig cfg;
  return {cfg.steps_per_period, MOVOSC_SCHEME_ADAPTIVE_SIMPSON, cfg.tolerance, 1};
}

movosc_status movosc_excitation_amplitude(const movosc_trajectory* traj, int axis,
                                          const movosc_params* params, double t,
                                          const movosc_quadrature* quad,
                                          movosc_excitation* out) {
  return guarded([&] {
    const auto& tr = need(traj, "trajectory").t;
    const auto& p = need(params, "params").p;
    auto& o = need(out, "out");
    const auto r = movosc::excitation_amplitude(tr, axis, p, t, to_config(quad));
    o.t = r.t;
    o.u_re = r.u.real();
    o.u_im = r.u.imag();
    o.gamma = r.gamma;
    o.phi = r.phi.value_or(0.0);
    o.phi_valid = r.phi.has_value();
  });
}

movosc_status movosc_fixed_frame_delta(const movosc_trajectory* traj, int axis,
                                       const movosc_params* params, double t,
                                       const movosc_quadrature* quad, double* re, double* im) {
  return guarded([&] {
    const auto d = movosc::fixed_frame_delta(need(traj, "trajectory").t, axis,
                                             need(params, "params").p, t, to_config(quad));
    need(re, "re") = d.real();
    need(im, "im") = d.imag();
  });
}

movosc_status movosc_total_excitation(const movosc_trajectory* traj, const movosc_params* params,
                                      double t, const movosc_quadrature* quad, double* w) {
  return guarded([&] {
    need(w, "w") = movosc::total_excitation(need(traj, "trajectory").t,
                                            need(params, "params").p, t, to_config(quad));
  });
}

movosc_status movosc_closed_form_constant_accel(double a, const movosc_params* params, double t,
                                                double* gamma) {
  return guarded([&] {
    need(gamma, "gamma") = movosc::closed_form_constant_accel(a, need(params, "params").p, t);
  });
}

movosc_status movosc_closed_form_kick_G(double v, const movosc_params* params, double* G) {
  return guarded(
      [&] { need(G, "G") = movosc::closed_form_kick_G(v, need(params, "params").p); });
}

movosc_status movosc_closed_form_kick_stop(double v, const movosc_params* params,
                                           double moving_time, double* gamma) {
  return guarded([&] {
    need(gamma, "gamma") =
        movosc::closed_form_kick_stop(v, need(params, "params").p, moving_time);
  });
}

movosc_status movosc_closed_form_sinusoidal(double R, double Omega, const movosc_params* params,
                                            double t, double* gamma) {
  return guarded([&] {
    need(gamma, "gamma") = movosc::sinusoidal_gamma(R, Omega, need(params, "params").p, t);
  });
}

movosc_status movosc_sinusoidal_G(double R, double Omega, const movosc_params* params,
                                  double* G) {
  return guarded(
      [&] { need(G, "G") = movosc::sinusoidal_G(R, Omega, need(params, "params").p); });
}

movosc_status movosc_closed_form_circular(double R, double Omega, const movosc_params* params,
                                          double s, double* w) {
  return guarded([&] {
    need(w, "w") = movosc::closed_form_circular(R, Omega, need(params, "params").p, s);
  });
}

movosc_status movosc_circular_slow_G(double R, double Omega, const movosc_params* params,
                                     double* G) {
  return guarded(
      [&] { need(G, "G") = movosc::circular_slow_G(R, Omega, need(params, "params").p); });
}

movosc_status movosc_circular_envelope(double R, double Omega, const movosc_params* params,
                                       double* w) {
  return guarded(
      [&] { need(w, "w") = movosc::circular_envelope(R, Omega, need(params, "params").p); });
}

movosc_status movosc_uniform_motion_gamma(double v, const movosc_params* params, double t,
                                          double* gamma) {
  return guarded([&] {
    need(gamma, "gamma") = movosc::uniform_motion_gamma(v, need(params, "params").p, t);
  });
}

// Transitions --------------------------------------------------------------

movosc_status movosc_laguerre_assoc(int n, int alpha, double x, double* value) {
  return guarded([&] { need(value, "value") = movosc::laguerre_assoc(n, alpha, x); });
}

movosc_status movosc_transition_probability(int m, int n, double gamma, double* p) {
  return guarded([&] { need(p, "p") = movosc::transition_probability(m, n, gamma); });
}

movosc_status movosc_coherent_amplitude(double alpha_re, double alpha_im, double beta_re,
                                        double beta_im, double u_re, double u_im, double phi,
                                        double* re, double* im) {
  return guarded([&] {
    const auto a = movosc::coherent_amplitude({alpha_re, alpha_im}, {beta_re, beta_im},
                                              {u_re, u_im}, phi);
    need(re, "re") = a.real();
    need(im, "im") = a.imag();
  });
}

movosc_status movosc_transition_row(int m, double gamma, double tail_epsilon, double* probs,
                                    size_t capacity, size_t* length, double* tail_bound,
                                    double* tail_mass) {
  movosc_status status = MOVOSC_OK;
  const movosc_status rc = guarded([&] {
    const auto row = movosc::transition_row(m, gamma, tail_epsilon);
    if (tail_bound) *tail_bound = row.tail_bound;
    if (tail_mass) *tail_mass = row.tail_mass;
    copy_out(row.probs, probs, capacity, length, status);
  });
  if (rc != MOVOSC_OK) return rc;
  if (status != MOVOSC_OK) return fail(status, "transition_row: output buffer too small");
  return status;
}

movosc_status movosc_multi_axis_probability(const int* m, const int* n, const double* axis_gamma,
                                            size_t axes, double* p) {
  return guarded([&] {
    if (axes > 0) {
      need(m, "m");
      need(n, "n");
      need(axis_gamma, "axis_gamma");
    }
    need(p, "p") = movosc::multi_axis_probability({m, axes}, {n, axes}, {axis_gamma, axes});
  });
}

movosc_status movosc_degenerate_probability(int m_level, int n_level, const double* axis_gamma,
                                            size_t axes, movosc_degeneracy convention,
                                            double* p) {
  return guarded([&] {
    if (axes > 0) need(axis_gamma, "axis_gamma");
    const movosc::DegenerateSpec spec(std::vector<double>(axis_gamma, axis_gamma + axes));
    const auto conv = convention == MOVOSC_DEGENERACY_AVERAGED
                          ? movosc::DegeneracyConvention::averaged
                          : movosc::DegeneracyConvention::summed;
    need(p, "p") = movosc::degenerate_probability(m_level, n_level, spec, conv);
  });
}

// Oracle -------------------------------------------------------------------

movosc_status movosc_grid_for_trajectory(const movosc_trajectory* traj, int axis,
                                         const movosc_params* params, double t_final, int n_max,
                                         size_t points, movosc_grid_spec* out) {
  return guarded([&] {
    const auto g = movosc::oracle::Grid::for_trajectory(
        need(traj, "trajectory").t, axis, need(params, "params").p, t_final, n_max, points);
    need(out, "out") = {g.x_min(), g.x_max(), g.points()};
  });
}

movosc_status movosc_fock_state(int n, double center, double boost_velocity,
                                const movosc_params* params, const movosc_grid_spec* grid,
                                movosc_state** out) {
  return guarded([&] {
    need(out, "out");
    auto s = movosc::oracle::fock_state(n, center, boost_velocity, need(params, "params").p,
                                        to_grid(grid));
    *out = new movosc_state{std::move(s)};
  });
}

movosc_status movosc_coherent_state(double alpha_re, double alpha_im, const movosc_params* params,
                                    const movosc_grid_spec* grid, double t, movosc_frame frame,
                                    const movosc_trajectory* traj, int axis,
                                    movosc_state** out) {
  return guarded([&] {
    need(out, "out");
    movosc::oracle::CoherentFrame f = movosc::oracle::CoherentFrame::fixed;
    if (frame == MOVOSC_FRAME_FORCED) f = movosc::oracle::CoherentFrame::forced;
    if (frame == MOVOSC_FRAME_MOVING) f = movosc::oracle::CoherentFrame::moving;
    const movosc::Trajectory* tr = traj ? &traj->t : nullptr;
    if (f != movosc::oracle::CoherentFrame::fixed && tr == nullptr) {
      throw NullArgument{"trajectory required for this frame"};
    }
    auto s = movosc::oracle::coherent_state({alpha_re, alpha_im}, need(params, "params").p,
                                            to_grid(grid), t, f, tr, axis);
    *out = new movosc_state{std::move(s)};
  });
}

void movosc_state_destroy(movosc_state* state) { delete state; }

double movosc_state_time(const movosc_state* state) { return state ? state->s.t : 0.0; }

double movosc_state_norm(const movosc_state* state) { return state ? state->s.norm() : 0.0; }

movosc_status movosc_state_overlap(const movosc_state* a, const movosc_state* b, double* re,
                                   double* im) {
  return guarded([&] {
    const auto v = movosc::oracle::inner_product(need(a, "a").s, need(b, "b").s);
    need(re, "re") = v.real();
    need(im, "im") = v.imag();
  });
}

movosc_propagation movosc_propagation_default(void) {
  const movosc::oracle::PropagationConfig cfg;
  return {cfg.steps_per_period, cfg.norm_tolerance};
}

movosc_status movosc_propagate(const movosc_state* initial, const movosc_trajectory* traj,
                               int axis, const movosc_params* params, double t_final,
                               const movosc_propagation* cfg, movosc_state** out,
                               double* max_norm_drift) {
  return guarded([&] {
    need(out, "out");
    movosc::oracle::PropagationConfig pc;
    if (cfg) {
      pc.steps_per_period = cfg->steps_per_period;
      pc.norm_tolerance = cfg->norm_tolerance;
    }
    auto r = movosc::oracle::propagate(need(initial, "initial").s, need(traj, "trajectory").t,
                                       axis, need(params, "params").p, t_final, pc);
    if (max_norm_drift) *max_norm_drift = r.max_norm_drift;
    *out = new movosc_state{std::move(r.state)};
  });
}

movosc_status movosc_measure_transitions(const movosc_state* state, const movosc_trajectory* traj,
                                         int axis, const movosc_params* params, int n_max,
                                         double* probs, int* truncated) {
  return guarded([&] {
    need(probs, "probs");
    const auto m = movosc::oracle::measure_transitions(
        need(state, "state").s, need(traj, "trajectory").t, axis, need(params, "params").p,
        n_max);
    std::copy(m.probs.begin(), m.probs.end(), probs);
    if (truncated) *truncated = m.truncated;
  });
}

movosc_status movosc_write_snapshot(const movosc_state* state, const char* path) {
  return guarded([&] {
    if (path == nullptr) throw NullArgument{"path"};
    movosc::oracle::write_snapshot(need(state, "state").s, path);
  });
}

// Transport ----------------------------------------------------------------

movosc_optimizer movosc_optimizer_default(void) {
  const movosc::OptimizerConfig cfg;
  return {cfg.budget, cfg.threshold, cfg.max_restarts, cfg.seed};
}

namespace {

movosc::TransportProblem to_problem(const movosc_transport_spec* spec,
                                    const movosc_params* params) {
  const auto& s = need(spec, "spec");
  movosc::TransportProblem p;
  p.displacement = s.displacement;
  p.duration = s.duration;
  p.params = need(params, "params").p;
  p.family = s.family == MOVOSC_TRANSPORT_PIECEWISE_ACCELERATION
                 ? movosc::TransportFamily::piecewise_acceleration
                 : movosc::TransportFamily::polynomial;
  p.degree = s.degree;
  p.segments = s.segments;
  p.validate();
  return p;
}

}  // namespace

movosc_status movosc_transport_free_count(const movosc_transport_spec* spec, int* count) {
  return guarded([&] {
    movosc_params dummy{movosc::OscillatorParams::dimensionless()};
    need(count, "count") = to_problem(spec, &dummy).free_parameter_count();
  });
}

movosc_status movosc_transport_objective(const movosc_transport_spec* spec,
                                         const movosc_params* params, const double* free_params,
                                         size_t count, double* residual) {
  return guarded([&] {
    if (count > 0) need(free_params, "free_params");
    need(residual, "residual") =
        movosc::objective(to_problem(spec, params), {free_params, count});
  });
}

movosc_status movosc_transport_optimize(const movosc_transport_spec* spec,
                                        const movosc_params* params, const double* seed,
                                        size_t seed_count, const movosc_optimizer* cfg,
                                        movosc_transport_solution** out) {
  return guarded([&] {
    need(out, "out");
    const auto problem = to_problem(spec, params);
    std::vector<double> start;
    if (seed_count == 0) {
      start = problem.default_seed();
    } else {
      need(seed, "seed");
      start.assign(seed, seed + seed_count);
    }
    movosc::OptimizerConfig oc;
    if (cfg) {
      oc.budget = cfg->budget;
      oc.threshold = cfg->threshold;
      oc.max_restarts = cfg->max_restarts;
      oc.seed = cfg->seed;
    }
    auto sol = movosc::optimize(problem, start, oc);
    const bool ok = movosc::check_constraints(problem, sol.trajectory).satisfied;
    movosc::Trajectory traj = sol.trajectory;
    *out = new movosc_transport_solution{std::move(sol), {std::move(traj)}, ok};
  });
}

void movosc_transport_solution_destroy(movosc_transport_solution* sol) { delete sol; }

double movosc_transport_residual(const movosc_transport_solution* sol) {
  return sol ? sol->sol.residual : 0.0;
}

int movosc_transport_evaluations(const movosc_transport_solution* sol) {
  return sol ? sol->sol.evaluations : 0;
}

int movosc_transport_converged(const movosc_transport_solution* sol) {
  return sol ? sol->sol.converged : 0;
}

int movosc_transport_constraints_satisfied(const movosc_transport_solution* sol) {
  return sol ? sol->satisfied : 0;
}

movosc_status movosc_transport_coefficients(const movosc_transport_solution* sol, double* out,
                                            size_t capacity, size_t* length) {
  movosc_status status = MOVOSC_OK;
  const movosc_status rc = guarded(
      [&] { copy_out(need(sol, "solution").sol.coefficients, out, capacity, length, status); });
  if (rc != MOVOSC_OK) return rc;
  if (status != MOVOSC_OK) return fail(status, "transport_coefficients: output buffer too small");
  return status;
}

const movosc_trajectory* movosc_transport_trajectory(const movosc_transport_solution* sol) {
  return sol ? &sol->traj : nullptr;
}

}  // extern "C"
