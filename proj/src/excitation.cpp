#include "movosc/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "movosc/errors.hpp"

namespace movosc {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
constexpr double kResonanceDetuning = 1e-9;

void check_time(const Trajectory& traj, double t) {
  const double T = traj.duration();
  if (!(t >= 0.0) || t > T * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time " << t << " outside trajectory domain [0, " << T << "]";
    throw RangeError(msg.str());
  }
}

/// Panels covering [0, t]: steps_per_period per shortest time scale of each
/// interval between breakpoints.
std::vector<double> simpson_edges(const Trajectory& traj, const OscillatorParams& p, double t,
                                  const QuadratureConfig& cfg) {
  return quadrature::panel_edges(0.0, t, traj.breakpoints(), [&](double lo, double hi) {
    return std::min(p.period(), traj.timescale_between(lo, hi)) / cfg.steps_per_period;
  });
}

/// Filon panels only need to resolve the trajectory, not the trap oscillation.
std::vector<double> filon_edges(const Trajectory& traj, double t, const QuadratureConfig& cfg) {
  return quadrature::panel_edges(0.0, t, traj.breakpoints(), [&](double lo, double hi) {
    return std::min(traj.timescale_between(lo, hi), t) / cfg.steps_per_period;
  });
}

cplx integrate(const quadrature::RealFunction& f, double k, const Trajectory& traj,
               const OscillatorParams& p, double t, const QuadratureConfig& cfg) {
  if (cfg.scheme == QuadratureScheme::composite_filon) {
    const auto edges = filon_edges(traj, t, cfg);
    return quadrature::composite_filon(f, k, edges, 4).value;
  }
  const auto edges = simpson_edges(traj, p, t, cfg);
  return quadrature::adaptive_simpson(f, k, edges, cfg).value;
}

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

void check_resonance(double Omega, double omega, const char* what) {
  if (std::abs(Omega - omega) < kResonanceDetuning * omega) {
    std::ostringstream msg;
    msg << what << ": Omega equals omega to within 1e-9 (resonance); use the resonance form";
    throw SingularCaseError(msg.str());
  }
}

}  // namespace

ExcitationResult excitation_amplitude(const Trajectory& traj, int axis,
                                      const OscillatorParams& params, double t,
                                      const QuadratureConfig& cfg) {
  cfg.validate();
  check_time(traj, t);
  t = std::min(t, traj.duration());
  (void)traj.eval(0.0, axis);  // validates the axis index

  const double omega = params.omega();
  const double scale = params.amplitude_scale();
  auto accel = [&traj, axis](double tau) { return traj.eval(tau, axis).acceleration; };

  ExcitationResult out;
  out.t = t;
  const bool want_phase = cfg.compute_phase && traj.boundary_flags(axis).at_rest();

  if (t == 0.0) {
    if (want_phase) out.phi = 0.0;
    return out;
  }

  if (!want_phase || cfg.scheme == QuadratureScheme::composite_filon) {
    out.u = -kI * scale * integrate(accel, omega, traj, params, t, cfg);
    out.gamma = std::norm(out.u);
    if (!want_phase) return out;
  }

  // Cumulative pass on quarter panels: u at five points per panel, then the
  // phase integrand by Boole's rule over each full panel.
  const auto coarse = simpson_edges(traj, params, t, cfg);
  std::vector<double> edges;
  edges.reserve(4 * coarse.size());
  edges.push_back(coarse.front());
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    const double a = coarse[i - 1], h = coarse[i] - a;
    edges.push_back(a + 0.25 * h);
    edges.push_back(a + 0.5 * h);
    edges.push_back(a + 0.75 * h);
    edges.push_back(coarse[i]);
  }
  const auto cumulative = quadrature::adaptive_simpson_cumulative(accel, omega, edges, cfg);

  const double mass_over_hbar = params.mass() / params.hbar();
  auto phase_rate = [&](std::size_t i) {
    const double tau = edges[i];
    const Kinematics k = traj.eval(tau, axis);
    const cplx u = -kI * scale * cumulative.values[i];
    const cplx du = -kI * scale * k.acceleration * std::polar(1.0, -omega * tau);
    return std::imag(du * std::conj(u)) + mass_over_hbar * k.position * k.acceleration;
  };
  double phi = 0.0;
  double f0 = phase_rate(0);
  for (std::size_t i = 4; i < edges.size(); i += 4) {
    const double f1 = phase_rate(i - 3), f2 = phase_rate(i - 2), f3 = phase_rate(i - 1);
    const double f4 = phase_rate(i);
    phi += (edges[i] - edges[i - 4]) / 90.0 * (7.0 * (f0 + f4) + 32.0 * (f1 + f3) + 12.0 * f2);
    f0 = f4;
  }
  out.phi = phi;

  if (cfg.scheme != QuadratureScheme::composite_filon) {
    out.u = -kI * scale * cumulative.values.back();
    out.gamma = std::norm(out.u);
  }
  return out;
}

cplx fixed_frame_delta(const Trajectory& traj, int axis, const OscillatorParams& params, double t,
                       const QuadratureConfig& cfg) {
  cfg.validate();
  check_time(traj, t);
  t = std::min(t, traj.duration());
  (void)traj.eval(0.0, axis);
  if (t == 0.0) return {};

  const double omega = params.omega();
  const double force_scale = params.mass() * omega * omega;
  auto force = [&traj, axis, force_scale](double tau) {
    return force_scale * traj.eval(tau, axis).position;
  };
  const double prefactor = 1.0 / std::sqrt(2.0 * params.mass() * params.hbar() * omega);
  // exp(+i omega tau) is exp(-i k tau) with k = -omega.
  return -kI * prefactor * integrate(force, -omega, traj, params, t, cfg);
}

double total_excitation(const Trajectory& traj, const OscillatorParams& params, double t,
                        const QuadratureConfig& cfg) {
  QuadratureConfig amplitude_only = cfg;
  amplitude_only.compute_phase = false;
  double w = 0.0;
  for (int axis = 0; axis < traj.dimension(); ++axis) {
    w += excitation_amplitude(traj, axis, params, t, amplitude_only).gamma;
  }
  return w;
}

// ---------------------------------------------------------------------------

cplx closed_form_constant_accel_amplitude(double a, const OscillatorParams& p, double t) {
  const double w = p.omega();
  const double scale = a * std::sqrt(p.mass() / (2.0 * p.hbar() * w * w * w));
  return scale * (std::polar(1.0, -w * t) - 1.0);
}

double closed_form_constant_accel(double a, const OscillatorParams& p, double t) {
  const double w = p.omega();
  return 2.0 * p.mass() * a * a / (p.hbar() * w * w * w) * sin2(0.5 * w * t);
}

double closed_form_kick_G(double v, const OscillatorParams& p) {
  return p.mass() * v * v / (2.0 * p.hbar() * p.omega());
}

double closed_form_kick_stop(double v, const OscillatorParams& p, double moving_time) {
  return 4.0 * closed_form_kick_G(v, p) * sin2(0.5 * p.omega() * moving_time);
}

double sinusoidal_G(double R, double Omega, const OscillatorParams& p) {
  return closed_form_kick_G(R * Omega, p);
}

double closed_form_sinusoidal(double R, double Omega, const OscillatorParams& p, double t) {
  const double w = p.omega();
  check_resonance(Omega, w, "closed_form_sinusoidal");
  const double wm = w - Omega;
  const double wp = w + Omega;
  const double sm = std::sin(0.5 * wm * t);
  const double sp = std::sin(0.5 * wp * t);
  const double bracket = sm * sm / (wm * wm) + sp * sp / (wp * wp) +
                         2.0 * std::cos(Omega * t) * sm * sp / (wm * wp);
  return sinusoidal_G(R, Omega, p) * Omega * Omega * bracket;
}

double closed_form_sinusoidal_return(double R, double Omega, const OscillatorParams& p, double s) {
  const double w = p.omega();
  check_resonance(Omega, w, "closed_form_sinusoidal_return");
  const double d = Omega * Omega - w * w;
  return 4.0 * sinusoidal_G(R, Omega, p) * (Omega * w) * (Omega * w) / (d * d) *
         sin2(s * kPi * w / Omega);
}

double closed_form_sinusoidal_resonance(double R, const OscillatorParams& p, double t) {
  const double w = p.omega();
  const double s = std::sin(w * t);
  const double bracket = 0.25 * t * t + s * s / (4.0 * w * w) + t * std::cos(w * t) * s / (2.0 * w);
  return sinusoidal_G(R, w, p) * w * w * bracket;
}

double sinusoidal_gamma(double R, double Omega, const OscillatorParams& p, double t) {
  if (std::abs(Omega - p.omega()) < kResonanceDetuning * p.omega()) {
    return closed_form_sinusoidal_resonance(R, p, t);
  }
  return closed_form_sinusoidal(R, Omega, p, t);
}

double circular_envelope(double R, double Omega, const OscillatorParams& p) {
  const double w = p.omega();
  check_resonance(Omega, w, "closed_form_circular");
  const double row = R * Omega * w;
  const double d = w * w - Omega * Omega;
  return 2.0 * p.mass() * row * row * (w * w + Omega * Omega) / (p.hbar() * w * d * d);
}

double closed_form_circular(double R, double Omega, const OscillatorParams& p, double s) {
  return circular_envelope(R, Omega, p) * sin2(s * kPi * p.omega() / Omega);
}

double circular_slow_G(double R, double Omega, const OscillatorParams& p) {
  return 2.0 * p.mass() * R * R * Omega * Omega / (p.hbar() * p.omega());
}

double closed_form_circular_slow(double R, double Omega, const OscillatorParams& p, double s) {
  return circular_slow_G(R, Omega, p) * sin2(s * kPi * p.omega() / Omega);
}

double uniform_motion_gamma(double v, const OscillatorParams& p, double t) {
  const double x = p.omega() * t;
  return closed_form_kick_G(v, p) * (x * x + 4.0 * sin2(0.5 * x) - 2.0 * x * std::sin(x));
}

}  // namespace movosc
