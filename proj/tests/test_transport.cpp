#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "movosc/errors.hpp"
#include "movosc/transport.hpp"

using namespace movosc;
using cplx = std::complex<double>;

namespace {

TransportProblem polynomial_problem(double d, double periods, int degree) {
  TransportProblem p;
  p.displacement = d;
  p.duration = periods * 2.0 * kPi;
  p.degree = degree;
  return p;
}

// |u(T)|^2 for b = d (3 s^2 - 2 s^3), s = t / T, whose acceleration is linear:
// b'' = A + B t with A = 6 d / T^2, B = -12 d / T^3 (unit oscillator).
double cubic_residual(double d, double T) {
  const double A = 6.0 * d / (T * T), B = -12.0 * d / (T * T * T);
  const cplx i(0.0, 1.0);
  const cplx e = std::exp(-i * T);
  const cplx m0 = (1.0 - e) / i;                  // int e^{-it}
  const cplx m1 = i * T * e + (e - 1.0);          // int t e^{-it}
  return 0.5 * std::norm(A * m0 + B * m1);
}

}  // namespace

TEST_CASE("constraint elimination") {
  for (int degree : {3, 5, 7}) {
    const auto p = polynomial_problem(1.3, 1.7, degree);
    CHECK(p.free_parameter_count() == degree - 3);
    std::vector<double> free = p.parameter_scale();
    for (std::size_t j = 0; j < free.size(); ++j) free[j] *= 0.3 * (j + 1) * std::pow(-1.0, j);
    const auto coeff = p.coefficients(free);
    REQUIRE(coeff.size() == static_cast<std::size_t>(degree + 1));
    CHECK(coeff[0] == 0.0);
    CHECK(coeff[1] == 0.0);
    // Independent evaluation of b(T) and b'(T) from the coefficients.
    double bT = 0.0, vT = 0.0;
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      bT += coeff[j] * std::pow(p.duration, static_cast<double>(j));
      if (j > 0) vT += j * coeff[j] * std::pow(p.duration, j - 1.0);
    }
    CHECK(bT == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(std::abs(vT) < 1e-12 * 1.3 / p.duration);
    CHECK(check_constraints(p, p.build(free)).satisfied);
  }

  TransportProblem seg;
  seg.displacement = 2.0;
  seg.duration = 5.0;
  seg.family = TransportFamily::piecewise_acceleration;
  seg.segments = 5;
  CHECK(seg.free_parameter_count() == 3);
  const std::vector<double> free{0.3, -0.1, 0.2};
  const auto acc = seg.coefficients(free);
  REQUIRE(acc.size() == 5);
  // Zero net velocity change and the right displacement, segment by segment.
  const double h = seg.duration / 5.0;
  double v = 0.0, x = 0.0;
  for (double a : acc) {
    x += v * h + 0.5 * a * h * h;
    v += a * h;
  }
  CHECK(std::abs(v) < 1e-12);
  CHECK(x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(check_constraints(seg, seg.build(free)).satisfied);
}

TEST_CASE("objective special cases") {
  // No displacement: the zero trajectory is excitation-free.
  const auto still = polynomial_problem(0.0, 1.3, 5);
  CHECK(objective(still, std::vector<double>{0.0, 0.0}) == 0.0);

  // Accelerate then decelerate with each phase spanning a whole period.
  TransportProblem bang;
  bang.displacement = 1.0;
  bang.duration = 2.0 * 2.0 * kPi;
  bang.family = TransportFamily::piecewise_acceleration;
  bang.segments = 2;
  CHECK(bang.free_parameter_count() == 0);
  CHECK(objective(bang, {}) < 1e-8);
  bang.duration = 2.0 * kPi;
  CHECK(objective(bang, {}) > 1e-3);

  // Fast smoothstep transport heats.
  const auto fast = polynomial_problem(1.0, 0.5, 5);
  CHECK(objective(fast, fast.default_seed()) > 0.1);

  // The unique cubic against its linear-acceleration integral.
  for (double periods : {0.1, 0.5, 2.3}) {
    const auto cubic = polynomial_problem(1.0, periods, 3);
    CHECK(objective(cubic, {}) ==
          doctest::Approx(cubic_residual(1.0, cubic.duration)).epsilon(1e-9));
  }
}

TEST_CASE("optimizer finds excitation-free transport over three periods") {
  const auto p = polynomial_problem(1.0, 3.0, 5);
  const auto seed = p.default_seed();
  const auto sol = optimize(p, seed);
  CHECK(sol.residual < 1e-6);
  CHECK(sol.residual <= objective(p, seed));
  CHECK(sol.converged == (sol.residual < 1e-8));
  CHECK(sol.evaluations <= 2000);
  CHECK(check_constraints(p, sol.trajectory).satisfied);
  CHECK(objective(p, sol.free_params) == doctest::Approx(sol.residual).epsilon(1e-12).scale(1e-20));

  const auto again = optimize(p, seed);
  CHECK(again.residual == sol.residual);
  CHECK(again.free_params == sol.free_params);

  TransportProblem seg = p;
  seg.family = TransportFamily::piecewise_acceleration;
  seg.segments = 4;
  const auto ssol = optimize(seg, seg.default_seed());
  CHECK(ssol.residual <= objective(seg, seg.default_seed()));
  CHECK(check_constraints(seg, ssol.trajectory).satisfied);
}

TEST_CASE("degenerate optimizer inputs") {
  const auto still = polynomial_problem(0.0, 0.7, 5);
  const auto zero = optimize(still, std::vector<double>{0.0, 0.0});
  CHECK(zero.residual == 0.0);
  CHECK(zero.converged);

  const auto cubic = polynomial_problem(1.0, 0.1, 3);
  const auto fixed = optimize(cubic, {});
  CHECK(fixed.residual == objective(cubic, {}));
  CHECK(fixed.evaluations == 1);
  CHECK_FALSE(fixed.converged);
}

TEST_CASE("residual scales with the square of the displacement") {
  // One free parameter and a positive optimum, searched to exhaustion.
  OptimizerConfig cfg;
  cfg.threshold = 0.0;
  cfg.budget = 400;
  const auto one = polynomial_problem(1.0, 0.5, 4);
  const auto two = polynomial_problem(2.0, 0.5, 4);
  auto seed2 = one.default_seed();
  for (double& s : seed2) s *= 2.0;
  const auto a = optimize(one, one.default_seed(), cfg);
  const auto b = optimize(two, seed2, cfg);
  REQUIRE(a.residual > 1e-6);
  CHECK(b.residual / a.residual == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("transport argument checking") {
  auto p = polynomial_problem(1.0, 1.0, 5);
  CHECK_THROWS_AS(optimize(p, std::vector<double>{0.0}), InvalidArgument);
  OptimizerConfig tight;
  tight.budget = 10;
  CHECK_THROWS_AS(optimize(p, p.default_seed(), tight), InvalidArgument);
  p.duration = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = polynomial_problem(1.0, 1.0, 2);
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = polynomial_problem(std::nan(""), 1.0, 5);
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  TransportProblem seg;
  seg.family = TransportFamily::piecewise_acceleration;
  seg.segments = 1;
  CHECK_THROWS_AS(seg.validate(), InvalidArgument);
}
