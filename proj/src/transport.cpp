#include "movosc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "movosc/errors.hpp"
#include "movosc/excitation.hpp"
#include "movosc/simplex.hpp"

namespace movosc {

namespace {

constexpr double kConstraintTol = 1e-9;

double length_unit(double d) { return d != 0.0 ? std::abs(d) : 1.0; }

}  // namespace

void TransportProblem::validate() const {
  if (!std::isfinite(displacement)) throw InvalidArgument("transport displacement must be finite");
  if (!(std::isfinite(duration) && duration > 0.0)) {
    throw InvalidArgument("transport duration must be positive");
  }
  if (family == TransportFamily::polynomial && degree < 3) {
    throw InvalidArgument("polynomial transport needs degree >= 3 to meet four boundary conditions");
  }
  if (family == TransportFamily::piecewise_acceleration && segments < 2) {
    throw InvalidArgument("piecewise transport needs at least two segments");
  }
  quadrature.validate();
}

int TransportProblem::free_parameter_count() const {
  return family == TransportFamily::polynomial ? degree - 3 : segments - 2;
}

std::vector<double> TransportProblem::parameter_scale() const {
  const double unit = length_unit(displacement);
  std::vector<double> scale;
  for (int i = 0; i < free_parameter_count(); ++i) {
    const int power = family == TransportFamily::polynomial ? i + 4 : 2;
    scale.push_back(unit / std::pow(duration, power));
  }
  return scale;
}

std::vector<double> TransportProblem::default_seed() const {
  return std::vector<double>(static_cast<std::size_t>(free_parameter_count()), 0.0);
}

std::vector<double> TransportProblem::coefficients(std::span<const double> free) const {
  validate();
  if (static_cast<int>(free.size()) != free_parameter_count()) {
    throw InvalidArgument("transport: wrong number of free parameters");
  }
  for (double f : free) {
    if (!std::isfinite(f)) throw InvalidArgument("transport: free parameters must be finite");
  }
  const double d = displacement;
  const double T = duration;

  if (family == TransportFamily::polynomial) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const int j = static_cast<int>(i) + 4;
      const double term = free[i] * std::pow(T, j);
      c[static_cast<std::size_t>(j)] = free[i];
      s0 += term;
      s1 += j * term;
    }
    // c2 T^2 + c3 T^3 = d - s0 and 2 c2 T^2 + 3 c3 T^3 = -s1.
    const double a = d - s0;
    const double b = -s1;
    c[3] = (b - 2.0 * a) / (T * T * T);
    c[2] = (3.0 * a - b) / (T * T);
    return c;
  }

  const int k = segments;
  const double tau = T / k;
  std::vector<double> acc(free.begin(), free.end());
  double s0 = 0.0, weighted = 0.0;
  for (int i = 1; i <= k - 2; ++i) {
    const double a = acc[static_cast<std::size_t>(i - 1)];
    s0 += a;
    weighted += a * (k - i + 0.5);
  }
  // Sum of accelerations vanishes; displacement sum a_i tau^2 (K - i + 1/2) equals d.
  const double q = d / (tau * tau) - weighted;
  const double second_last = q + 0.5 * s0;
  acc.push_back(second_last);
  acc.push_back(-s0 - second_last);
  return acc;
}

Trajectory TransportProblem::build(std::span<const double> free) const {
  auto c = coefficients(free);
  if (family == TransportFamily::polynomial) return make_polynomial(std::move(c), duration);
  return make_piecewise_acceleration(std::move(c), duration);
}

double objective(const TransportProblem& problem, std::span<const double> free) {
  const Trajectory traj = problem.build(free);
  QuadratureConfig cfg = problem.quadrature;
  cfg.compute_phase = false;
  return excitation_amplitude(traj, 0, problem.params, problem.duration, cfg).gamma;
}

ConstraintReport check_constraints(const TransportProblem& problem, const Trajectory& traj) {
  const double unit = length_unit(problem.displacement);
  const double speed = unit / problem.duration;
  const Kinematics start = traj.eval(0.0);
  const Kinematics end = traj.eval(problem.duration);
  ConstraintReport r;
  r.start_position = start.position;
  r.start_velocity = start.velocity;
  r.end_position_error = end.position - problem.displacement;
  r.end_velocity = end.velocity;
  r.satisfied = std::abs(r.start_position) <= kConstraintTol * unit &&
                std::abs(r.start_velocity) <= kConstraintTol * speed &&
                std::abs(r.end_position_error) <= kConstraintTol * unit &&
                std::abs(r.end_velocity) <= kConstraintTol * speed;
  return r;
}

TransportSolution optimize(const TransportProblem& problem, std::span<const double> seed,
                           const OptimizerConfig& cfg) {
  problem.validate();
  if (cfg.budget < 50) throw InvalidArgument("optimize: budget must be at least 50 evaluations");
  const int dim = problem.free_parameter_count();
  if (static_cast<int>(seed.size()) != dim) {
    throw InvalidArgument("optimize: seed length does not match the free parameter count");
  }

  const std::vector<double> scale = problem.parameter_scale();
  auto to_physical = [&](std::span<const double> z) {
    std::vector<double> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] * scale[i];
    return x;
  };

  int evaluations = 0;
  auto f = [&](std::span<const double> z) {
    ++evaluations;
    return objective(problem, to_physical(z));
  };

  std::vector<double> best_z(seed.size());
  for (std::size_t i = 0; i < seed.size(); ++i) best_z[i] = seed[i] / scale[i];
  double best_f = f(best_z);

  int restarts = 0;
  if (dim > 0 && !(best_f < cfg.threshold)) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const std::vector<double> step(static_cast<std::size_t>(dim), cfg.initial_step);

    for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
      const int remaining = cfg.budget - evaluations;
      if (remaining < dim + 2) break;
      std::vector<double> start = best_z;
      if (attempt > 0) {
        ++restarts;
        for (double& z : start) z += cfg.initial_step * jitter(rng);
      }
      SimplexOptions opts;
      opts.max_evaluations = remaining;
      opts.target = cfg.threshold;
      const SimplexResult run = nelder_mead(f, start, step, opts);
      if (run.value < best_f) {
        best_f = run.value;
        best_z = run.best;
      }
      if (best_f < cfg.threshold) break;
    }
  }

  TransportSolution sol{problem.build(to_physical(best_z)), to_physical(best_z), {}, best_f,
                        evaluations, restarts, best_f < cfg.threshold};
  sol.coefficients = problem.coefficients(sol.free_params);
  return sol;
}

}  // namespace movosc
