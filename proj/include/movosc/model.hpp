#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace movosc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// CODATA 2018 reduced Planck constant, used as the SI default.
inline constexpr double kCodataHbar = 1.054571817e-34;

enum class UnitsMode { si, dimensionless };

/// Mass, trap frequency and Planck constant of the oscillator.
class OscillatorParams {
 public:
  /// M = omega = hbar = 1.
  static OscillatorParams dimensionless();
  static OscillatorParams si(double mass, double omega, double hbar = kCodataHbar);

  double mass() const noexcept { return mass_; }
  double omega() const noexcept { return omega_; }
  double hbar() const noexcept { return hbar_; }
  UnitsMode units() const noexcept { return units_; }

  double period() const noexcept { return kTwoPi / omega_; }
  /// Ground-state width sqrt(hbar / (M omega)).
  double ground_width() const noexcept;
  /// sqrt(M / (2 hbar omega)), converts a velocity into an excitation amplitude.
  double amplitude_scale() const noexcept;

  /// Copy with a different trap frequency (used by sweeps).
  OscillatorParams with_omega(double omega) const;

 private:
  OscillatorParams(double mass, double omega, double hbar, UnitsMode units);

  double mass_;
  double omega_;
  double hbar_;
  UnitsMode units_;
};

struct Kinematics {
  double position;
  double velocity;
  double acceleration;
};

struct BoundaryFlags {
  bool zero_position = true;
  bool zero_velocity = true;

  bool at_rest() const noexcept { return zero_position && zero_velocity; }
};

/// Trap-center motion b(t) on [0, T] in one or two dimensions.
///
/// Each axis is a pure function of time returning (b, b', b''). Instances are
/// immutable and may be shared freely between threads. Evaluators are only
/// guaranteed meaningful on [0, T].
///
/// `breakpoints` lists interior instants where the acceleration is not smooth
/// (ramp ends, segment switches); quadrature places panel edges there.
/// `timescale` is the intrinsic time scale of the motion away from any ramp
/// (modulation period); infinity when the motion has none. `local` lists
/// windows with a shorter scale of their own, such as ramps.
struct LocalTimescale {
  double begin;
  double end;
  double timescale;
};

class Trajectory {
 public:
  using AxisEvaluator = std::function<Kinematics(double)>;

  Trajectory(std::string family, double duration, std::vector<AxisEvaluator> axes,
             std::vector<double> breakpoints = {},
             double timescale = std::numeric_limits<double>::infinity(),
             std::vector<std::string> warnings = {},
             std::vector<LocalTimescale> local = {});

  const std::string& family() const noexcept { return family_; }
  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  double duration() const noexcept { return duration_; }
  /// Shortest time scale anywhere on [0, T].
  double timescale() const noexcept;
  /// Shortest time scale on [a, b], counting local windows that overlap it.
  double timescale_between(double a, double b) const noexcept;

  Kinematics eval(double t, int axis = 0) const;

  BoundaryFlags boundary_flags(int axis = 0) const;
  /// b(0) = b'(0) = 0 on every axis.
  bool starts_at_rest() const noexcept;

  /// Largest |b| seen on a uniform sampling of [0, T] across all axes.
  double characteristic_length() const noexcept { return char_length_; }

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const std::string> warnings() const noexcept { return warnings_; }

 private:
  void check_axis(int axis) const;

  std::string family_;
  double duration_;
  std::vector<AxisEvaluator> axes_;
  std::vector<double> breakpoints_;
  double timescale_;
  std::vector<std::string> warnings_;
  std::vector<LocalTimescale> local_;
  std::vector<BoundaryFlags> flags_;
  double char_length_ = 0.0;
};

/// Quintic smoothstep 6u^5 - 15u^4 + 10u^3 clamped to [0, 1].
double smoothstep(double u) noexcept;
double smoothstep_derivative(double u) noexcept;
/// Integral of smoothstep from 0 to u (equals 1/2 at u = 1).
double smoothstep_integral(double u) noexcept;

Trajectory make_constant_acceleration(double acceleration, double duration);

/// Velocity ramps from 0 to `velocity` over [0, ramp] and stays there; with
/// `stop_at`, ramps back to rest over [stop_at, stop_at + ramp].
Trajectory make_kick(double velocity, double ramp, double duration,
                     std::optional<double> stop_at = std::nullopt);

/// b(t) = R (1 - cos(Omega t)).
Trajectory make_sinusoidal(double amplitude, double modulation, double duration);

/// Circular motion of radius R starting at rest. The angular velocity ramps
/// up to `rotation` over [0, ramp] and back down over the last `ramp`; the
/// duration is 2 pi s / Omega + ramp so that exactly `revolutions` turns are
/// completed and the center stops at its starting point.
Trajectory make_circular(double radius, double rotation, double ramp, double revolutions);

/// b(t) = sum_k c_k t^k.
Trajectory make_polynomial(std::vector<double> coefficients, double duration);

/// Piecewise-constant acceleration on equal-length segments, starting at rest.
Trajectory make_piecewise_acceleration(std::vector<double> accelerations, double duration);

}  // namespace movosc
