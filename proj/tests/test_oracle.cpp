#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>

#include "movosc/errors.hpp"
#include "movosc/excitation.hpp"
#include "movosc/oracle.hpp"
#include "movosc/transitions.hpp"

using namespace movosc;
using namespace movosc::oracle;
using cplx = std::complex<double>;

namespace {

const OscillatorParams unit = OscillatorParams::dimensionless();

double fidelity(const GridState& a, const GridState& b) { return std::norm(inner_product(a, b)); }

double poisson(double gamma, int n) { return std::exp(-gamma) * std::pow(gamma, n) / std::tgamma(n + 1.0); }

// Propagates the ground state under `traj` to t and measures moving-frame levels.
TransitionMeasurement ground_state_run(const Trajectory& traj, double t, int n_max,
                                       std::size_t points = 2048, int steps = 2000) {
  const auto grid = Grid::for_trajectory(traj, 0, unit, t, n_max, points);
  const auto start = fock_state(0, 0.0, 0.0, unit, grid);
  PropagationConfig cfg;
  cfg.steps_per_period = steps;
  const auto run = propagate(start, traj, 0, unit, t, cfg);
  CHECK(run.max_norm_drift < 1e-8);
  return measure_transitions(run.state, traj, 0, unit, n_max);
}

}  // namespace

TEST_CASE("grid construction") {
  const Grid g(-10.0, 10.0, 512);
  CHECK(g.dx() == doctest::Approx(20.0 / 512));
  CHECK(g.x(0) == -10.0);
  CHECK(g.k_max() == doctest::Approx(kPi / g.dx()));
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 300), InvalidArgument);
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 128), InvalidArgument);
  CHECK_THROWS_AS(Grid(1.0, 1.0, 512), InvalidArgument);

  const auto traj = make_constant_acceleration(1.0, 10.0);
  const auto fit = Grid::for_trajectory(traj, 0, unit, 10.0, 4, 1024);
  CHECK(fit.x_min() < -8.0);
  CHECK(fit.x_max() > 50.0 + 8.0);
}

TEST_CASE("Fock states are orthonormal on the grid") {
  const Grid g(-16.0, 16.0, 1024);
  for (int m = 0; m <= 6; ++m) {
    const auto a = fock_state(m, 0.3, 0.0, unit, g);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 0; n < m; ++n) {
      CHECK(std::abs(inner_product(a, fock_state(n, 0.3, 0.0, unit, g))) < 1e-10);
    }
  }
  // Displaced and boosted ground state: |<0|0_{d,v}>|^2 = exp(-(d^2 + v^2)/2).
  const auto shifted = fock_state(0, 2.0, 1.0, unit, g);
  CHECK(fidelity(fock_state(0, 0.0, 0.0, unit, g), shifted) ==
        doctest::Approx(std::exp(-2.5)).epsilon(1e-10));

  CHECK_THROWS_AS(fock_state(61, 0.0, 0.0, unit, g), InvalidArgument);
  CHECK_THROWS_AS(fock_state(0, 0.0, 0.0, unit, Grid(-1.0, 1.0, 256)), ResourceError);
}

TEST_CASE("coherent states") {
  const Grid g(-16.0, 16.0, 1024);
  const auto ground = fock_state(0, 0.0, 0.0, unit, g);
  CHECK(fidelity(coherent_state(0.0, unit, g, 0.0), ground) == doctest::Approx(1.0).epsilon(1e-12));

  const auto one = coherent_state(1.0, unit, g, 0.0);
  CHECK(one.norm() == doctest::Approx(1.0).epsilon(1e-8));
  double mean_x = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i) mean_x += g.x(i) * std::norm(one.psi[i]) * g.dx();
  CHECK(mean_x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  // Fock content of a coherent state is Poisson in |alpha|^2.
  const cplx alpha(0.6, -0.9);
  const auto c = coherent_state(alpha, unit, g, 0.0);
  for (int n = 0; n <= 5; ++n) {
    CHECK(fidelity(fock_state(n, 0.0, 0.0, unit, g), c) ==
          doctest::Approx(poisson(std::norm(alpha), n)).epsilon(1e-9));
  }

  // Moving-frame vacuum at b = 2, b' = 0.5.
  const auto moving = make_polynomial({2.0, 0.5}, 1.0);
  const auto vac = coherent_state(0.0, unit, g, 0.0, CoherentFrame::moving, &moving);
  CHECK(fidelity(vac, ground) == doctest::Approx(std::exp(-2.125)).epsilon(1e-10));
  CHECK(fidelity(vac, ground) == doctest::Approx(0.1194).epsilon(1e-3));

  // Global phases change nothing measurable.
  const auto traj = make_sinusoidal(0.4, 0.7, 10.0);
  const auto probe = coherent_state(cplx(0.2, 0.5), unit, g, 3.0);
  const auto plain = coherent_state(alpha, unit, g, 3.0, CoherentFrame::moving, &traj);
  const auto phased = coherent_state(alpha, unit, g, 3.0, CoherentFrame::moving, &traj, 0, true);
  CHECK(std::abs(std::abs(inner_product(plain, phased)) - 1.0) < 1e-12);
  CHECK(fidelity(probe, plain) == doctest::Approx(fidelity(probe, phased)).epsilon(1e-12));

  CHECK_THROWS_AS(coherent_state(alpha, unit, g, 1.0, CoherentFrame::forced), InvalidArgument);
}

TEST_CASE("stationary trap keeps eigenstates") {
  const auto still = make_constant_acceleration(0.0, 20.0 * kPi);
  const auto grid = Grid::for_trajectory(still, 0, unit, 20.0 * kPi, 5, 1024);
  const auto ground = fock_state(0, 0.0, 0.0, unit, grid);
  const auto one = propagate(ground, still, 0, unit, 2.0 * kPi);
  CHECK(fidelity(one.state, ground) == doctest::Approx(1.0).epsilon(1e-8));

  // Norm over ten periods.
  const auto ten = propagate(fock_state(3, 0.0, 0.0, unit, grid), still, 0, unit, 20.0 * kPi);
  CHECK(ten.max_norm_drift < 1e-8);
  const auto m = measure_transitions(ten.state, still, 0, unit, 6);
  for (int n = 0; n <= 6; ++n) CHECK(std::abs(m.probs[n] - (n == 3 ? 1.0 : 0.0)) < 1e-6);
  CHECK_FALSE(m.truncated);
}

TEST_CASE("constant acceleration: return after one period, Poisson at half period") {
  const auto traj = make_constant_acceleration(1.0, 2.0 * kPi);
  const auto full = ground_state_run(traj, 2.0 * kPi, 8);
  CHECK(full.probs[0] > 1.0 - 1e-4);

  const auto half = ground_state_run(traj, kPi, 12);
  for (int n = 0; n <= 12; ++n) CHECK(std::abs(half.probs[n] - poisson(2.0, n)) < 1e-3);
  double mean = 0.0;
  for (int n = 0; n <= 12; ++n) mean += n * half.probs[n];
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("kicked trap populates a Poisson distribution with mean G") {
  const double v = 1.0;  // G = M v^2 / (2 hbar omega) = 0.5
  const double ramp = 0.02 * 2.0 * kPi;
  const auto traj = make_kick(v, ramp, 3.0 * kPi);
  const auto m = ground_state_run(traj, 3.0 * kPi, 8);
  const double g = excitation_amplitude(traj, 0, unit, 3.0 * kPi).gamma;
  CHECK(g == doctest::Approx(0.5).epsilon(1e-2));
  double mean = 0.0;
  for (int n = 0; n <= 8; ++n) {
    CHECK(std::abs(m.probs[n] - poisson(0.5, n)) < 1e-3 + 0.05 * std::abs(g - 0.5));
    CHECK(std::abs(m.probs[n] - poisson(g, n)) < 1e-4);
    mean += n * m.probs[n];
  }
  CHECK(mean == doctest::Approx(g).epsilon(1e-3));
}

TEST_CASE("sinusoidal resonance after one period") {
  const double R = 0.05;
  const auto traj = make_sinusoidal(R, 1.0, 2.0 * kPi);
  const double gamma = sinusoidal_G(R, 1.0, unit) * kPi * kPi;
  const auto m = ground_state_run(traj, 2.0 * kPi, 6);
  CHECK(m.probs[1] == doctest::Approx(poisson(gamma, 1)).epsilon(1e-2));
}

TEST_CASE("forced coherent states follow the grid evolution") {
  const auto traj = make_sinusoidal(0.7, 0.45, 12.0);
  const cplx alpha(0.5, 0.3);
  const auto grid = Grid::for_trajectory(traj, 0, unit, 12.0, 6, 2048, 2.0);
  const auto start = coherent_state(alpha, unit, grid, 0.0);
  const auto run = propagate(start, traj, 0, unit, 12.0);
  const auto expected = coherent_state(alpha, unit, grid, 12.0, CoherentFrame::forced, &traj);
  CHECK(fidelity(run.state, expected) > 1.0 - 1e-6);

  // Propagation continues from the state's own time stamp.
  const auto first = propagate(start, traj, 0, unit, 5.0);
  const auto second = propagate(first.state, traj, 0, unit, 12.0);
  CHECK(second.state.t == doctest::Approx(12.0));
  CHECK(fidelity(second.state, run.state) > 1.0 - 1e-8);
}

TEST_CASE("grid and time-step refinement leaves probabilities unchanged") {
  const auto traj = make_sinusoidal(0.8, 0.6, 9.0);
  const auto coarse = ground_state_run(traj, 9.0, 8, 1024, 1000);
  const auto fine = ground_state_run(traj, 9.0, 8, 2048, 2000);
  const double gamma = excitation_amplitude(traj, 0, unit, 9.0).gamma;
  for (int n = 0; n <= 8; ++n) {
    CHECK(std::abs(coarse.probs[n] - fine.probs[n]) < 1e-4);
    CHECK(std::abs(fine.probs[n] - transition_probability(0, n, gamma)) < 1e-4);
  }
}

TEST_CASE("propagation errors") {
  const auto traj = make_constant_acceleration(1.0, 2.0);
  const Grid small(-10.0, 10.0, 256);
  const auto start = fock_state(0, 0.0, 0.0, unit, small);
  PropagationConfig cfg;
  cfg.steps_per_period = 100;
  CHECK_THROWS_AS(propagate(start, traj, 0, unit, 1.0, cfg), InvalidArgument);
  CHECK_THROWS_AS(propagate(start, traj, 0, unit, 3.0), RangeError);
  const auto runaway = make_constant_acceleration(5.0, 4.0);
  CHECK_THROWS_AS(propagate(start, runaway, 0, unit, 4.0), ResourceError);
}

TEST_CASE("snapshot round trip") {
  const Grid g(-12.0, 12.0, 256);
  auto state = coherent_state(cplx(0.4, 0.2), unit, g, 1.25);
  const auto path = std::filesystem::temp_directory_path() / "movosc_snapshot_test.bin";
  write_snapshot(state, path);
  const auto back = read_snapshot(path);
  CHECK(back.t == state.t);
  CHECK(back.grid.points() == g.points());
  CHECK(back.grid.x_min() == g.x_min());
  CHECK(back.grid.x_max() == g.x_max());
  for (std::size_t i = 0; i < g.points(); ++i) CHECK(back.psi[i] == state.psi[i]);
  std::filesystem::remove(path);
  CHECK_THROWS(read_snapshot(path));
}
