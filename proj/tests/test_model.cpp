#include <doctest.h>

#include <cmath>
#include <vector>

#include "movosc/errors.hpp"
#include "movosc/model.hpp"
#include "support.hpp"

using namespace movosc;
using testing::uniform;

namespace {

bool near_breakpoint(const Trajectory& traj, double t, double h) {
  if (t - h < 0.0 || t + h > traj.duration()) return true;
  for (double b : traj.breakpoints()) {
    if (std::abs(t - b) <= 2.0 * h) return true;
  }
  return false;
}

// Central differences of b and b' against the analytic derivatives.
void check_derivatives(const Trajectory& traj) {
  for (int axis = 0; axis < traj.dimension(); ++axis) {
    double vmax = 0.0, amax = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const auto k = traj.eval(traj.duration() * i / 400.0, axis);
      vmax = std::max(vmax, std::abs(k.velocity));
      amax = std::max(amax, std::abs(k.acceleration));
    }
    const double h = 1e-5 * std::min(traj.timescale(), traj.duration());
    int checked = 0;
    while (checked < 100) {
      const double t = uniform(0.0, traj.duration());
      if (near_breakpoint(traj, t, h)) continue;
      const auto lo = traj.eval(t - h, axis);
      const auto mid = traj.eval(t, axis);
      const auto hi = traj.eval(t + h, axis);
      const double v_fd = (hi.position - lo.position) / (2.0 * h);
      const double a_fd = (hi.velocity - lo.velocity) / (2.0 * h);
      CHECK(testing::close_rel(v_fd, mid.velocity, 1e-6, 1e-6 * vmax + 1e-300));
      CHECK(testing::close_rel(a_fd, mid.acceleration, 1e-6, 1e-6 * amax + 1e-300));
      ++checked;
    }
  }
}

}  // namespace

TEST_CASE("oscillator parameters") {
  const auto d = OscillatorParams::dimensionless();
  CHECK(d.mass() == 1.0);
  CHECK(d.omega() == 1.0);
  CHECK(d.hbar() == 1.0);
  CHECK(d.units() == UnitsMode::dimensionless);
  CHECK(d.period() == doctest::Approx(2.0 * kPi));
  CHECK(d.amplitude_scale() == doctest::Approx(std::sqrt(0.5)));

  const auto si = OscillatorParams::si(1e-25, 100.0);
  CHECK(si.hbar() == kCodataHbar);
  CHECK(si.units() == UnitsMode::si);
  CHECK(si.ground_width() == doctest::Approx(std::sqrt(kCodataHbar / (1e-25 * 100.0))));

  const auto faster = d.with_omega(3.0);
  CHECK(faster.omega() == 3.0);
  CHECK(faster.mass() == 1.0);

  CHECK_THROWS_AS(OscillatorParams::si(-1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(OscillatorParams::si(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(OscillatorParams::si(1.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(d.with_omega(-2.0), InvalidArgument);
}

TEST_CASE("smoothstep ramp profile") {
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5));
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(2.0) == 1.0);
  CHECK(smoothstep_derivative(0.0) == 0.0);
  CHECK(smoothstep_derivative(1.0) == 0.0);
  CHECK(smoothstep_integral(1.0) == doctest::Approx(0.5));

  // Integral against a fine trapezoid sum, derivative against differences.
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
    sum += 0.5 * (smoothstep(a) + smoothstep(b)) / n;
    if ((i + 1) % 5000 == 0) CHECK(smoothstep_integral(b) == doctest::Approx(sum).epsilon(1e-8));
  }
  for (double u : {0.1, 0.3, 0.77}) {
    const double h = 1e-6;
    CHECK((smoothstep(u + h) - smoothstep(u - h)) / (2 * h) ==
          doctest::Approx(smoothstep_derivative(u)).epsilon(1e-8));
  }
}

TEST_CASE("built-in families have consistent derivatives") {
  check_derivatives(make_constant_acceleration(1.3, 10.0));
  check_derivatives(make_kick(0.8, 0.05, 6.0));
  check_derivatives(make_kick(0.8, 0.05, 6.0, 3.0));
  check_derivatives(make_sinusoidal(0.4, 0.7, 20.0));
  check_derivatives(make_circular(0.5, 0.3, 0.1, 2.0));
  check_derivatives(make_polynomial({0.1, -0.2, 0.3, 0.05, -0.01}, 5.0));
  check_derivatives(make_piecewise_acceleration({1.0, -2.0, 0.5, 0.5}, 8.0));
}

TEST_CASE("polynomial smoothstep displacement") {
  const auto traj = make_polynomial({0.0, 0.0, 3.0, -2.0}, 1.0);
  const auto end = traj.eval(1.0);
  CHECK(end.position == doctest::Approx(1.0));
  CHECK(end.velocity == doctest::Approx(0.0));
  CHECK(traj.starts_at_rest());
  CHECK_FALSE(make_polynomial({0.2, 0.0, 1.0}, 1.0).starts_at_rest());
  const auto moving = make_polynomial({0.0, 0.5}, 1.0).boundary_flags();
  CHECK(moving.zero_position);
  CHECK_FALSE(moving.zero_velocity);
}

TEST_CASE("adding a linear function leaves the acceleration unchanged") {
  const std::vector<double> base{0.0, 0.0, 0.4, -0.1, 0.02};
  std::vector<double> shifted = base;
  shifted[0] += 2.5;
  shifted[1] -= 0.7;
  const auto a = make_polynomial(base, 4.0);
  const auto b = make_polynomial(shifted, 4.0);
  for (int i = 0; i <= 50; ++i) {
    const double t = 4.0 * i / 50.0;
    CHECK(a.eval(t).acceleration == b.eval(t).acceleration);
  }
}

TEST_CASE("constant acceleration and kick kinematics") {
  const auto c = make_constant_acceleration(2.0, 3.0);
  CHECK(c.eval(1.5).position == doctest::Approx(2.25));
  CHECK(c.eval(1.5).velocity == doctest::Approx(3.0));
  CHECK(c.eval(1.5).acceleration == 2.0);

  const auto k = make_kick(1.5, 0.2, 5.0);
  CHECK(k.eval(0.1).velocity == doctest::Approx(0.75));
  CHECK(k.eval(3.0).velocity == doctest::Approx(1.5));
  CHECK(k.eval(3.0).position == doctest::Approx(1.5 * (3.0 - 0.1)));
  CHECK(k.eval(3.0).acceleration == 0.0);

  const auto stop = make_kick(1.5, 0.2, 5.0, 2.0);
  CHECK(stop.eval(4.0).velocity == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(stop.eval(4.0).position == doctest::Approx(3.0));
  CHECK(stop.breakpoints().size() == 3);

  CHECK_THROWS_AS(make_kick(1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_kick(1.0, 0.5, 1.0, 0.6), InvalidArgument);
  CHECK_THROWS_AS(make_constant_acceleration(1.0, -1.0), InvalidArgument);
}

TEST_CASE("circular motion") {
  const double R = 0.5, Omega = 0.3, ramp = 0.2, s = 2.0;
  const auto traj = make_circular(R, Omega, ramp, s);
  CHECK(traj.dimension() == 2);
  CHECK(traj.duration() == doctest::Approx(2.0 * kPi * s / Omega + ramp));
  CHECK(traj.starts_at_rest());
  CHECK(traj.warnings().empty());

  // On the plateau the center sits exactly on the circle at angle Omega (t - T_a / 2).
  for (int i = 1; i < 50; ++i) {
    const double t = ramp + (traj.duration() - 2.0 * ramp) * i / 50.0;
    const double phi = Omega * (t - 0.5 * ramp);
    CHECK(traj.eval(t, 0).position == R * (1.0 - std::cos(phi)));
    CHECK(traj.eval(t, 1).position == R * std::sin(phi));
  }
  // The center completes s turns and stops.
  const auto xe = traj.eval(traj.duration(), 0);
  const auto ye = traj.eval(traj.duration(), 1);
  CHECK(std::abs(xe.position) < 1e-12);
  CHECK(std::abs(ye.position) < 1e-12);
  CHECK(std::abs(xe.velocity) < 1e-12);
  CHECK(std::abs(ye.velocity) < 1e-12);

  CHECK_FALSE(make_circular(R, Omega, 2.0 * kPi / Omega, 2.0).warnings().empty());
  CHECK_THROWS_AS(make_circular(R, Omega, 100.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(traj.eval(1.0, 2), InvalidArgument);
}

TEST_CASE("sinusoidal motion starts at rest and returns at 2 pi s / Omega") {
  const auto traj = make_sinusoidal(0.3, 0.5, 4.0 * kPi);
  CHECK(traj.starts_at_rest());
  const auto ret = traj.eval(4.0 * kPi);
  CHECK(std::abs(ret.position) < 1e-15);
  CHECK(std::abs(ret.velocity) < 1e-15);
}

TEST_CASE("piecewise acceleration integrates segment by segment") {
  const auto traj = make_piecewise_acceleration({1.0, -1.0}, 2.0);
  CHECK(traj.eval(1.0).velocity == doctest::Approx(1.0));
  CHECK(traj.eval(2.0).velocity == doctest::Approx(0.0));
  CHECK(traj.eval(2.0).position == doctest::Approx(1.0));
  CHECK(traj.breakpoints().size() == 1);
  CHECK_THROWS_AS(make_piecewise_acceleration({}, 1.0), InvalidArgument);
}

TEST_CASE("local timescales apply only inside their windows") {
  const auto traj = make_circular(1.0, 0.1, 0.05, 1.0);
  CHECK(traj.timescale() == doctest::Approx(0.05));
  CHECK(traj.timescale_between(1.0, 2.0) == doctest::Approx(2.0 * kPi / 0.1));
  CHECK(traj.timescale_between(0.0, 0.05) == doctest::Approx(0.05));
}
