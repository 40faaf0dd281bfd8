#pragma once

#include <complex>
#include <optional>

#include "movosc/model.hpp"
#include "movosc/quadrature.hpp"

namespace movosc {

/// Excitation amplitude of one axis at time t.
///
/// `u` is the moving-frame amplitude, `gamma = |u|^2` the mean number of
/// excited quanta when starting from the ground state, and `phi` the phase
/// of the coherent-state overlap. `phi` is empty when the trajectory does not
/// start at rest (the phase formula assumes b(0) = b'(0) = 0) or when phase
/// integration was switched off.
struct ExcitationResult {
  std::complex<double> u;
  double gamma = 0.0;
  std::optional<double> phi;
  double t = 0.0;
};

/// u(t) = -i sqrt(M / 2 hbar omega) int_0^t b''(tau) exp(-i omega tau) dtau,
/// plus the accumulated phase
/// phi(t) = int_0^t { Im[u'(tau) u*(tau)] + M b(tau) b''(tau) / hbar } dtau.
///
/// Throws RangeError for t outside [0, T], NumericalError when quadrature
/// does not converge.
ExcitationResult excitation_amplitude(const Trajectory& traj, int axis,
                                      const OscillatorParams& params, double t,
                                      const QuadratureConfig& cfg = {});

/// Fixed-frame parameter
/// delta(t) = -i (2 M hbar omega)^{-1/2} int_0^t f(tau) exp(i omega tau) dtau
/// with the effective force f = M omega^2 b. |delta|^2 is the excitation
/// relative to the Fock states of the non-moving oscillator.
std::complex<double> fixed_frame_delta(const Trajectory& traj, int axis,
                                       const OscillatorParams& params, double t,
                                       const QuadratureConfig& cfg = {});

/// Sum of |u|^2 over all axes (w for a planar trajectory).
double total_excitation(const Trajectory& traj, const OscillatorParams& params, double t,
                        const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Closed forms for the built-in motion laws.

/// u(t) for constant acceleration a: a sqrt(M / (2 hbar omega^3)) (exp(-i omega t) - 1).
std::complex<double> closed_form_constant_accel_amplitude(double a, const OscillatorParams& p,
                                                          double t);
/// gamma(t) = (2 M a^2 / hbar omega^3) sin^2(omega t / 2).
double closed_form_constant_accel(double a, const OscillatorParams& p, double t);

/// G = M v^2 / (2 hbar omega): excitation after a sudden start to velocity v.
double closed_form_kick_G(double v, const OscillatorParams& p);
/// Sudden start followed by a sudden stop after `moving_time`: 4 G sin^2(omega T / 2).
double closed_form_kick_stop(double v, const OscillatorParams& p, double moving_time);

/// G = M (R Omega)^2 / (2 hbar omega) of the oscillating center b = R (1 - cos Omega t).
double sinusoidal_G(double R, double Omega, const OscillatorParams& p);
/// |u(t)|^2 for b = R (1 - cos Omega t). Throws SingularCaseError when
/// |Omega - omega| < 1e-9 omega; use closed_form_sinusoidal_resonance there.
double closed_form_sinusoidal(double R, double Omega, const OscillatorParams& p, double t);
/// |u|^2 at the return instant t = 2 pi s / Omega:
/// 4 G (Omega omega)^2 / (Omega^2 - omega^2)^2 sin^2(s pi omega / Omega).
double closed_form_sinusoidal_return(double R, double Omega, const OscillatorParams& p, double s);
/// Omega = omega limit of closed_form_sinusoidal; equals G (pi s)^2 at t = 2 pi s / omega.
double closed_form_sinusoidal_resonance(double R, const OscillatorParams& p, double t);
/// Dispatches to the resonance form when the detuning is below 1e-9 omega.
double sinusoidal_gamma(double R, double Omega, const OscillatorParams& p, double t);

/// w_s after s revolutions on a circle of radius R at angular velocity Omega,
/// with sudden start and stop. Throws SingularCaseError at resonance.
double closed_form_circular(double R, double Omega, const OscillatorParams& p, double s);
/// Slow-rotation prefactor G = 2 M R^2 Omega^2 / (hbar omega).
double circular_slow_G(double R, double Omega, const OscillatorParams& p);
/// Slow-rotation limit G sin^2(s pi omega / Omega).
double closed_form_circular_slow(double R, double Omega, const OscillatorParams& p, double s);
/// Envelope of closed_form_circular (value with the sin^2 factor set to one).
double circular_envelope(double R, double Omega, const OscillatorParams& p);

/// Fixed-frame gamma of uniform motion b = v t:
/// (M v^2 / 2 hbar omega) [(omega t)^2 + 4 sin^2(omega t / 2) - 2 omega t sin(omega t)].
double uniform_motion_gamma(double v, const OscillatorParams& p, double t);

}  // namespace movosc
