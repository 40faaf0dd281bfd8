#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "movosc/model.hpp"
#include "movosc/quadrature.hpp"

namespace movosc {

enum class TransportFamily { polynomial, piecewise_acceleration };

/// Move the trap by `displacement` in time `duration`, starting and ending at
/// rest, with as little residual excitation |u(T)|^2 as possible.
///
/// The four boundary conditions b(0) = b'(0) = 0, b(T) = d, b'(T) = 0 are
/// eliminated exactly. For the polynomial family of degree k the free
/// parameters are the physical coefficients c_4 .. c_k of t^4 .. t^k; the
/// coefficients c_2, c_3 follow from the end conditions. For K piecewise-
/// constant acceleration segments the free parameters are the first K - 2
/// accelerations.
struct TransportProblem {
  double displacement = 0.0;
  double duration = 1.0;
  OscillatorParams params = OscillatorParams::dimensionless();
  TransportFamily family = TransportFamily::polynomial;
  int degree = 5;
  int segments = 4;
  QuadratureConfig quadrature{};

  /// Throws InvalidArgument for T <= 0, non-finite d, degree < 3 or segments < 2.
  void validate() const;
  int free_parameter_count() const;
  /// Natural size of each free parameter (|d| / T^j, or |d| / T^2); used as
  /// the optimizer's initial step. Uses 1 in place of |d| when d = 0.
  std::vector<double> parameter_scale() const;
  /// Free parameters of the smoothstep displacement (polynomial) or of a
  /// symmetric accelerate/decelerate profile (segments).
  std::vector<double> default_seed() const;

  /// Full coefficient list c_0 .. c_k (polynomial) or accelerations (segments).
  std::vector<double> coefficients(std::span<const double> free) const;
  Trajectory build(std::span<const double> free) const;
};

/// |u(T)|^2 of the constrained trajectory with the given free parameters.
double objective(const TransportProblem& problem, std::span<const double> free);

struct OptimizerConfig {
  int budget = 2000;
  /// Residual below which the solution counts as converged.
  double threshold = 1e-8;
  int max_restarts = 5;
  /// Seeds the perturbation of restart points.
  std::uint64_t seed = 0;
  /// Initial simplex step in units of parameter_scale().
  double initial_step = 0.5;
};

struct TransportSolution {
  Trajectory trajectory;
  std::vector<double> free_params;
  std::vector<double> coefficients;
  double residual = 0.0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
};

/// Derivative-free simplex search from `seed`, restarting from perturbed
/// points on stagnation. Never returns a residual above objective(seed).
/// Throws InvalidArgument for budget < 50 or a seed of the wrong length.
TransportSolution optimize(const TransportProblem& problem, std::span<const double> seed,
                           const OptimizerConfig& cfg = {});

struct ConstraintReport {
  double start_position = 0.0;
  double start_velocity = 0.0;
  double end_position_error = 0.0;
  double end_velocity = 0.0;
  /// All four within 1e-9 relative to d and d / T.
  bool satisfied = false;
};

/// Evaluates the four boundary conditions on an arbitrary trajectory.
ConstraintReport check_constraints(const TransportProblem& problem, const Trajectory& traj);

}  // namespace movosc
