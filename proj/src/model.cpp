#include "movosc/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "movosc/errors.hpp"

namespace movosc {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

constexpr int kCharacteristicSamples = 257;
constexpr double kBoundaryRelTol = 1e-12;

}  // namespace

// ---------------------------------------------------------------------------
// OscillatorParams

OscillatorParams::OscillatorParams(double mass, double omega, double hbar, UnitsMode units)
    : mass_(mass), omega_(omega), hbar_(hbar), units_(units) {
  require(finite_positive(mass), "oscillator mass must be positive and finite");
  require(finite_positive(omega), "oscillator frequency must be positive and finite");
  require(finite_positive(hbar), "hbar must be positive and finite");
}

OscillatorParams OscillatorParams::dimensionless() {
  return OscillatorParams(1.0, 1.0, 1.0, UnitsMode::dimensionless);
}

OscillatorParams OscillatorParams::si(double mass, double omega, double hbar) {
  return OscillatorParams(mass, omega, hbar, UnitsMode::si);
}

double OscillatorParams::ground_width() const noexcept {
  return std::sqrt(hbar_ / (mass_ * omega_));
}

double OscillatorParams::amplitude_scale() const noexcept {
  return std::sqrt(mass_ / (2.0 * hbar_ * omega_));
}

OscillatorParams OscillatorParams::with_omega(double omega) const {
  if (units_ == UnitsMode::dimensionless && omega != 1.0) {
    // A dimensionless oscillator with omega != 1 is no longer dimensionless.
    return OscillatorParams(mass_, omega, hbar_, UnitsMode::si);
  }
  return OscillatorParams(mass_, omega, hbar_, units_);
}

// ---------------------------------------------------------------------------
// Trajectory

double Trajectory::timescale() const noexcept {
  double ts = timescale_;
  for (const auto& w : local_) ts = std::min(ts, w.timescale);
  return ts;
}

double Trajectory::timescale_between(double a, double b) const noexcept {
  double ts = timescale_;
  for (const auto& w : local_) {
    if (w.begin < b && w.end > a) ts = std::min(ts, w.timescale);
  }
  return ts;
}

Trajectory::Trajectory(std::string family, double duration, std::vector<AxisEvaluator> axes,
                       std::vector<double> breakpoints, double timescale,
                       std::vector<std::string> warnings, std::vector<LocalTimescale> local)
    : family_(std::move(family)),
      duration_(duration),
      axes_(std::move(axes)),
      timescale_(timescale),
      warnings_(std::move(warnings)),
      local_(std::move(local)) {
  require(finite_positive(duration), "trajectory duration must be positive and finite");
  require(axes_.size() == 1 || axes_.size() == 2, "trajectory dimension must be 1 or 2");
  require(timescale > 0.0, "trajectory timescale must be positive");
  for (const auto& w : local_) {
    require(w.timescale > 0.0 && w.end >= w.begin, "local timescale window is invalid");
  }
  for (const auto& a : axes_) require(static_cast<bool>(a), "trajectory axis evaluator is empty");

  for (double b : breakpoints) {
    if (b > 0.0 && b < duration_) breakpoints_.push_back(b);
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

  for (const auto& axis : axes_) {
    for (int i = 0; i < kCharacteristicSamples; ++i) {
      const double t = duration_ * i / (kCharacteristicSamples - 1);
      const Kinematics k = axis(t);
      if (!std::isfinite(k.position) || !std::isfinite(k.velocity) ||
          !std::isfinite(k.acceleration)) {
        throw InvalidArgument("trajectory evaluates to a non-finite value on [0, T]");
      }
      char_length_ = std::max(char_length_, std::abs(k.position));
    }
  }

  const double length_tol = kBoundaryRelTol * char_length_;
  const double velocity_tol = length_tol / duration_;
  for (const auto& axis : axes_) {
    const Kinematics k0 = axis(0.0);
    flags_.push_back({std::abs(k0.position) <= length_tol,
                      std::abs(k0.velocity) <= velocity_tol});
  }
}

void Trajectory::check_axis(int axis) const {
  if (axis < 0 || axis >= dimension()) {
    throw InvalidArgument("trajectory axis index out of range");
  }
}

Kinematics Trajectory::eval(double t, int axis) const {
  check_axis(axis);
  return axes_[static_cast<std::size_t>(axis)](t);
}

BoundaryFlags Trajectory::boundary_flags(int axis) const {
  check_axis(axis);
  return flags_[static_cast<std::size_t>(axis)];
}

bool Trajectory::starts_at_rest() const noexcept {
  return std::all_of(flags_.begin(), flags_.end(),
                     [](const BoundaryFlags& f) { return f.at_rest(); });
}

// ---------------------------------------------------------------------------
// Ramp profile

double smoothstep(double u) noexcept {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep_derivative(double u) noexcept {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double v = u * (1.0 - u);
  return 30.0 * v * v;
}

double smoothstep_integral(double u) noexcept {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 0.5 + (u - 1.0);
  const double u4 = u * u * u * u;
  return u4 * (2.5 + u * (-3.0 + u));
}

// ---------------------------------------------------------------------------
// Families

Trajectory make_constant_acceleration(double acceleration, double duration) {
  require(finite_positive(duration), "duration must be positive");
  require(std::isfinite(acceleration), "acceleration must be finite");
  auto axis = [a = acceleration](double t) {
    return Kinematics{0.5 * a * t * t, a * t, a};
  };
  return Trajectory("constant_accel", duration, {axis});
}

Trajectory make_kick(double velocity, double ramp, double duration, std::optional<double> stop_at) {
  require(std::isfinite(velocity), "velocity must be finite");
  require(finite_positive(duration), "duration must be positive");
  require(finite_positive(ramp) && ramp <= duration, "kick ramp must satisfy 0 < T_a <= T");
  if (stop_at) {
    require(std::isfinite(*stop_at) && *stop_at > ramp && *stop_at <= duration - ramp,
            "kick stop must satisfy T_a < stop_at <= T - T_a");
  }
  const double v = velocity;
  const double ta = ramp;
  const double stop = stop_at.value_or(std::numeric_limits<double>::infinity());

  auto axis = [v, ta, stop](double t) -> Kinematics {
    if (t <= ta) {
      const double w = t / ta;
      return {v * ta * smoothstep_integral(w), v * smoothstep(w),
              v * smoothstep_derivative(w) / ta};
    }
    if (t <= stop) return {v * (t - 0.5 * ta), v, 0.0};
    const double tau = t - stop;
    if (tau <= ta) {
      const double w = tau / ta;
      return {v * (stop - 0.5 * ta) + v * (tau - ta * smoothstep_integral(w)),
              v * (1.0 - smoothstep(w)), -v * smoothstep_derivative(w) / ta};
    }
    return {v * stop, 0.0, 0.0};
  };

  std::vector<double> breaks{ta};
  if (stop_at) {
    breaks.push_back(*stop_at);
    breaks.push_back(*stop_at + ramp);
  }
  std::vector<LocalTimescale> local{{0.0, ta, ta}};
  if (stop_at) local.push_back({*stop_at, *stop_at + ramp, ramp});
  return Trajectory("kick", duration, {axis}, std::move(breaks),
                    std::numeric_limits<double>::infinity(), {}, std::move(local));
}

Trajectory make_sinusoidal(double amplitude, double modulation, double duration) {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "amplitude R must be non-negative");
  require(finite_positive(modulation), "modulation frequency Omega must be positive");
  require(finite_positive(duration), "duration must be positive");
  auto axis = [r = amplitude, w = modulation](double t) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    return Kinematics{r * (1.0 - c), r * w * s, r * w * w * c};
  };
  return Trajectory("sinusoidal", duration, {axis}, {}, kTwoPi / modulation);
}

namespace {

struct RampedAngle {
  double angle;
  double rate;
  double accel;
};

/// Rotation angle with smoothstep up- and down-ramps of length `ramp`.
RampedAngle ramped_angle(double t, double rate, double ramp, double duration) {
  if (t <= ramp) {
    const double w = t / ramp;
    return {rate * ramp * smoothstep_integral(w), rate * smoothstep(w),
            rate * smoothstep_derivative(w) / ramp};
  }
  const double down = duration - ramp;
  if (t < down) return {rate * (t - 0.5 * ramp), rate, 0.0};
  const double tau = t - down;
  const double w = tau / ramp;
  return {rate * (down - 0.5 * ramp) + rate * (tau - ramp * smoothstep_integral(w)),
          rate * (1.0 - smoothstep(w)), -rate * smoothstep_derivative(w) / ramp};
}

}  // namespace

Trajectory make_circular(double radius, double rotation, double ramp, double revolutions) {
  require(std::isfinite(radius) && radius >= 0.0, "radius R must be non-negative");
  require(finite_positive(rotation), "rotation frequency Omega must be positive");
  require(finite_positive(revolutions), "revolution count must be positive");
  const double turn_time = kTwoPi * revolutions / rotation;
  require(finite_positive(ramp) && ramp <= turn_time,
          "ramp must satisfy 0 < T_a <= 2 pi s / Omega");
  const double duration = turn_time + ramp;

  std::vector<std::string> warnings;
  if (ramp >= kTwoPi / rotation) {
    std::ostringstream msg;
    msg << "circular ramp T_a = " << ramp
        << " is not short compared to 2 pi / Omega; closed-form comparison invalid";
    warnings.push_back(msg.str());
  }

  auto x_axis = [radius, rotation, ramp, duration](double t) {
    const auto a = ramped_angle(t, rotation, ramp, duration);
    const double c = std::cos(a.angle);
    const double s = std::sin(a.angle);
    return Kinematics{radius * (1.0 - c), radius * s * a.rate,
                      radius * (c * a.rate * a.rate + s * a.accel)};
  };
  auto y_axis = [radius, rotation, ramp, duration](double t) {
    const auto a = ramped_angle(t, rotation, ramp, duration);
    const double c = std::cos(a.angle);
    const double s = std::sin(a.angle);
    return Kinematics{radius * s, radius * c * a.rate,
                      radius * (-s * a.rate * a.rate + c * a.accel)};
  };
  return Trajectory("circular", duration, {x_axis, y_axis}, {ramp, duration - ramp},
                    kTwoPi / rotation, std::move(warnings),
                    {{0.0, ramp, ramp}, {duration - ramp, duration, ramp}});
}

Trajectory make_polynomial(std::vector<double> coefficients, double duration) {
  require(!coefficients.empty(), "polynomial needs at least one coefficient");
  require(finite_positive(duration), "duration must be positive");
  for (double c : coefficients) require(std::isfinite(c), "polynomial coefficients must be finite");

  auto coeffs = std::make_shared<const std::vector<double>>(std::move(coefficients));
  auto axis = [coeffs](double t) {
    const auto& c = *coeffs;
    // Horner for the value and both derivatives.
    double p = 0.0, dp = 0.0, ddp = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      ddp = ddp * t + 2.0 * dp;
      dp = dp * t + p;
      p = p * t + *it;
    }
    return Kinematics{p, dp, ddp};
  };
  return Trajectory("polynomial", duration, {axis});
}

Trajectory make_piecewise_acceleration(std::vector<double> accelerations, double duration) {
  require(!accelerations.empty(), "need at least one acceleration segment");
  require(finite_positive(duration), "duration must be positive");
  for (double a : accelerations) require(std::isfinite(a), "accelerations must be finite");

  struct Segment {
    double start, position, velocity, acceleration;
  };
  const auto count = accelerations.size();
  const double len = duration / static_cast<double>(count);
  auto segments = std::make_shared<std::vector<Segment>>();
  double x = 0.0, v = 0.0;
  std::vector<double> breaks;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = accelerations[i];
    segments->push_back({len * static_cast<double>(i), x, v, a});
    x += v * len + 0.5 * a * len * len;
    v += a * len;
    if (i > 0) breaks.push_back(len * static_cast<double>(i));
  }

  auto axis = [segments = std::shared_ptr<const std::vector<Segment>>(segments), len](double t) {
    const auto& segs = *segments;
    auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(t / len)));
    idx = std::min(idx, segs.size() - 1);
    const Segment& s = segs[idx];
    const double dt = t - s.start;
    return Kinematics{s.position + s.velocity * dt + 0.5 * s.acceleration * dt * dt,
                      s.velocity + s.acceleration * dt, s.acceleration};
  };
  return Trajectory("piecewise_accel", duration, {axis}, std::move(breaks), len);
}

}  // namespace movosc
