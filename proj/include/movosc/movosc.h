/*
 * C interface to the moving-oscillator excitation library.
 *
 * Objects are opaque handles created by movosc_*_create / movosc_make_*
 * functions and released with the matching *_destroy function. Every call
 * that can fail returns a movosc_status; on failure a message describing the
 * last error on the calling thread is available from movosc_last_error().
 * Handles are immutable after creation and may be shared between threads.
 */
#ifndef MOVOSC_H
#define MOVOSC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MOVOSC_BUILDING)
#    define MOVOSC_API __declspec(dllexport)
#  else
#    define MOVOSC_API __declspec(dllimport)
#  endif
#else
#  define MOVOSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum movosc_status {
  MOVOSC_OK = 0,
  MOVOSC_ERR_INVALID_ARGUMENT = 1,
  MOVOSC_ERR_RANGE = 2,
  MOVOSC_ERR_NUMERICAL = 3,
  MOVOSC_ERR_RESOURCE = 4,
  MOVOSC_ERR_SINGULAR = 5,
  MOVOSC_ERR_NULL_POINTER = 6,
  MOVOSC_ERR_BUFFER_TOO_SMALL = 7,
  MOVOSC_ERR_INTERNAL = 8
} movosc_status;

/* Message for the last failed call on this thread ("" if none). */
MOVOSC_API const char* movosc_last_error(void);
MOVOSC_API const char* movosc_status_name(movosc_status status);
MOVOSC_API const char* movosc_version(void);

/* ------------------------------------------------------------------------ */
/* Oscillator parameters                                                    */

typedef struct movosc_params movosc_params;

MOVOSC_API movosc_status movosc_params_create_dimensionless(movosc_params** out);
/* hbar <= 0 selects the CODATA value. */
MOVOSC_API movosc_status movosc_params_create_si(double mass, double omega, double hbar,
                                                 movosc_params** out);
MOVOSC_API movosc_status movosc_params_with_omega(const movosc_params* params, double omega,
                                                  movosc_params** out);
MOVOSC_API void movosc_params_destroy(movosc_params* params);
MOVOSC_API movosc_status movosc_params_get(const movosc_params* params, double* mass,
                                           double* omega, double* hbar, int* dimensionless);

/* ------------------------------------------------------------------------ */
/* Trajectories                                                             */

typedef struct movosc_trajectory movosc_trajectory;

MOVOSC_API movosc_status movosc_make_constant_acceleration(double a, double duration,
                                                           movosc_trajectory** out);
/* has_stop = 0 ignores stop_at. */
MOVOSC_API movosc_status movosc_make_kick(double v, double ramp, double duration, int has_stop,
                                          double stop_at, movosc_trajectory** out);
MOVOSC_API movosc_status movosc_make_sinusoidal(double R, double Omega, double duration,
                                                movosc_trajectory** out);
MOVOSC_API movosc_status movosc_make_circular(double R, double Omega, double ramp,
                                              double revolutions, movosc_trajectory** out);
MOVOSC_API movosc_status movosc_make_polynomial(const double* coeffs, size_t count,
                                                double duration, movosc_trajectory** out);
MOVOSC_API movosc_status movosc_make_piecewise_acceleration(const double* accelerations,
                                                            size_t count, double duration,
                                                            movosc_trajectory** out);
MOVOSC_API void movosc_trajectory_destroy(movosc_trajectory* traj);

MOVOSC_API int movosc_trajectory_dimension(const movosc_trajectory* traj);
MOVOSC_API double movosc_trajectory_duration(const movosc_trajectory* traj);
MOVOSC_API movosc_status movosc_trajectory_eval(const movosc_trajectory* traj, int axis, double t,
                                                double* position, double* velocity,
                                                double* acceleration);
MOVOSC_API movosc_status movosc_trajectory_boundary_flags(const movosc_trajectory* traj, int axis,
                                                          int* zero_position, int* zero_velocity);
MOVOSC_API size_t movosc_trajectory_warning_count(const movosc_trajectory* traj);
/* Returns NULL when index is out of range. Valid while the handle lives. */
MOVOSC_API const char* movosc_trajectory_warning(const movosc_trajectory* traj, size_t index);

/* ------------------------------------------------------------------------ */
/* Excitation                                                               */

typedef enum movosc_scheme {
  MOVOSC_SCHEME_ADAPTIVE_SIMPSON = 0,
  MOVOSC_SCHEME_COMPOSITE_FILON = 1
} movosc_scheme;

typedef struct movosc_quadrature {
  int steps_per_period;
  movosc_scheme scheme;
  double tolerance;
  int compute_phase;
} movosc_quadrature;

MOVOSC_API movosc_quadrature movosc_quadrature_default(void);

typedef struct movosc_excitation {
  double t;
  double u_re;
  double u_im;
  double gamma;
  double phi;
  int phi_valid;
} movosc_excitation;

/* quad may be NULL for defaults. */
MOVOSC_API movosc_status movosc_excitation_amplitude(const movosc_trajectory* traj, int axis,
                                                     const movosc_params* params, double t,
                                                     const movosc_quadrature* quad,
                                                     movosc_excitation* out);
MOVOSC_API movosc_status movosc_fixed_frame_delta(const movosc_trajectory* traj, int axis,
                                                  const movosc_params* params, double t,
                                                  const movosc_quadrature* quad, double* re,
                                                  double* im);
MOVOSC_API movosc_status movosc_total_excitation(const movosc_trajectory* traj,
                                                 const movosc_params* params, double t,
                                                 const movosc_quadrature* quad, double* w);

MOVOSC_API movosc_status movosc_closed_form_constant_accel(double a, const movosc_params* params,
                                                           double t, double* gamma);
MOVOSC_API movosc_status movosc_closed_form_kick_G(double v, const movosc_params* params,
                                                   double* G);
MOVOSC_API movosc_status movosc_closed_form_kick_stop(double v, const movosc_params* params,
                                                      double moving_time, double* gamma);
/* Routes to the resonance expression when |Omega - omega| < 1e-9 omega. */
MOVOSC_API movosc_status movosc_closed_form_sinusoidal(double R, double Omega,
                                                       const movosc_params* params, double t,
                                                       double* gamma);
MOVOSC_API movosc_status movosc_sinusoidal_G(double R, double Omega, const movosc_params* params,
                                             double* G);
MOVOSC_API movosc_status movosc_closed_form_circular(double R, double Omega,
                                                     const movosc_params* params, double s,
                                                     double* w);
MOVOSC_API movosc_status movosc_circular_slow_G(double R, double Omega,
                                                const movosc_params* params, double* G);
MOVOSC_API movosc_status movosc_circular_envelope(double R, double Omega,
                                                  const movosc_params* params, double* w);
MOVOSC_API movosc_status movosc_uniform_motion_gamma(double v, const movosc_params* params,
                                                     double t, double* gamma);

/* ------------------------------------------------------------------------ */
/* Transition probabilities                                                 */

MOVOSC_API movosc_status movosc_laguerre_assoc(int n, int alpha, double x, double* value);
MOVOSC_API movosc_status movosc_transition_probability(int m, int n, double gamma, double* p);
MOVOSC_API movosc_status movosc_coherent_amplitude(double alpha_re, double alpha_im,
                                                   double beta_re, double beta_im, double u_re,
                                                   double u_im, double phi, double* re,
                                                   double* im);

/*
 * Row m of P_mn truncated by tail_epsilon. Writes up to capacity entries to
 * probs and the full row length to *length; returns
 * MOVOSC_ERR_BUFFER_TOO_SMALL (with *length set) when capacity is short.
 * probs may be NULL when capacity is 0 to query the length.
 */
MOVOSC_API movosc_status movosc_transition_row(int m, double gamma, double tail_epsilon,
                                               double* probs, size_t capacity, size_t* length,
                                               double* tail_bound, double* tail_mass);

MOVOSC_API movosc_status movosc_multi_axis_probability(const int* m, const int* n,
                                                       const double* axis_gamma, size_t axes,
                                                       double* p);

typedef enum movosc_degeneracy {
  MOVOSC_DEGENERACY_SUMMED = 0,
  MOVOSC_DEGENERACY_AVERAGED = 1
} movosc_degeneracy;

MOVOSC_API movosc_status movosc_degenerate_probability(int m_level, int n_level,
                                                       const double* axis_gamma, size_t axes,
                                                       movosc_degeneracy convention, double* p);

/* ------------------------------------------------------------------------ */
/* Grid propagation oracle (one axis of a trajectory)                       */

typedef struct movosc_state movosc_state;

typedef struct movosc_grid_spec {
  double x_min;
  double x_max;
  size_t points;
} movosc_grid_spec;

MOVOSC_API movosc_status movosc_grid_for_trajectory(const movosc_trajectory* traj, int axis,
                                                    const movosc_params* params, double t_final,
                                                    int n_max, size_t points,
                                                    movosc_grid_spec* out);
MOVOSC_API movosc_status movosc_fock_state(int n, double center, double boost_velocity,
                                           const movosc_params* params,
                                           const movosc_grid_spec* grid, movosc_state** out);

typedef enum movosc_frame {
  MOVOSC_FRAME_FIXED = 0,
  MOVOSC_FRAME_FORCED = 1,
  MOVOSC_FRAME_MOVING = 2
} movosc_frame;

/* traj may be NULL for MOVOSC_FRAME_FIXED. */
MOVOSC_API movosc_status movosc_coherent_state(double alpha_re, double alpha_im,
                                               const movosc_params* params,
                                               const movosc_grid_spec* grid, double t,
                                               movosc_frame frame,
                                               const movosc_trajectory* traj, int axis,
                                               movosc_state** out);
MOVOSC_API void movosc_state_destroy(movosc_state* state);
MOVOSC_API double movosc_state_time(const movosc_state* state);
MOVOSC_API double movosc_state_norm(const movosc_state* state);
MOVOSC_API movosc_status movosc_state_overlap(const movosc_state* a, const movosc_state* b,
                                              double* re, double* im);

typedef struct movosc_propagation {
  int steps_per_period;
  double norm_tolerance;
} movosc_propagation;

MOVOSC_API movosc_propagation movosc_propagation_default(void);

/* Creates a new state; the input is not modified. drift may be NULL. */
MOVOSC_API movosc_status movosc_propagate(const movosc_state* initial,
                                          const movosc_trajectory* traj, int axis,
                                          const movosc_params* params, double t_final,
                                          const movosc_propagation* cfg, movosc_state** out,
                                          double* max_norm_drift);

/* probs must hold n_max + 1 entries. truncated may be NULL. */
MOVOSC_API movosc_status movosc_measure_transitions(const movosc_state* state,
                                                    const movosc_trajectory* traj, int axis,
                                                    const movosc_params* params, int n_max,
                                                    double* probs, int* truncated);
MOVOSC_API movosc_status movosc_write_snapshot(const movosc_state* state, const char* path);

/* ------------------------------------------------------------------------ */
/* Transport optimization                                                   */

typedef enum movosc_transport_family {
  MOVOSC_TRANSPORT_POLYNOMIAL = 0,
  MOVOSC_TRANSPORT_PIECEWISE_ACCELERATION = 1
} movosc_transport_family;

typedef struct movosc_transport_spec {
  double displacement;
  double duration;
  movosc_transport_family family;
  int degree;
  int segments;
} movosc_transport_spec;

typedef struct movosc_optimizer {
  int budget;
  double threshold;
  int max_restarts;
  uint64_t seed;
} movosc_optimizer;

MOVOSC_API movosc_optimizer movosc_optimizer_default(void);

typedef struct movosc_transport_solution movosc_transport_solution;

MOVOSC_API movosc_status movosc_transport_free_count(const movosc_transport_spec* spec,
                                                     int* count);
MOVOSC_API movosc_status movosc_transport_objective(const movosc_transport_spec* spec,
                                                    const movosc_params* params,
                                                    const double* free_params, size_t count,
                                                    double* residual);
/* seed may be NULL (default seed) when seed_count is 0. */
MOVOSC_API movosc_status movosc_transport_optimize(const movosc_transport_spec* spec,
                                                   const movosc_params* params,
                                                   const double* seed, size_t seed_count,
                                                   const movosc_optimizer* cfg,
                                                   movosc_transport_solution** out);
MOVOSC_API void movosc_transport_solution_destroy(movosc_transport_solution* sol);
MOVOSC_API double movosc_transport_residual(const movosc_transport_solution* sol);
MOVOSC_API int movosc_transport_evaluations(const movosc_transport_solution* sol);
MOVOSC_API int movosc_transport_converged(const movosc_transport_solution* sol);
MOVOSC_API int movosc_transport_constraints_satisfied(const movosc_transport_solution* sol);
/* Same length conventions as movosc_transition_row. */
MOVOSC_API movosc_status movosc_transport_coefficients(const movosc_transport_solution* sol,
                                                       double* out, size_t capacity,
                                                       size_t* length);
/* Borrowed handle, valid while the solution lives. */
MOVOSC_API const movosc_trajectory* movosc_transport_trajectory(
    const movosc_transport_solution* sol);

#ifdef __cplusplus
}
#endif

#endif /* MOVOSC_H */
