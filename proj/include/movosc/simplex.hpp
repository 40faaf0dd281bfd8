#pragma once

#include <functional>
#include <span>
#include <vector>

namespace movosc {

struct SimplexOptions {
  int max_evaluations = 1000;
  /// Stop once the best value drops below this.
  double target = 0.0;
  /// Stop when (f_worst - f_best) <= rel_tolerance * |f_best| + abs_tolerance.
  double rel_tolerance = 1e-12;
  double abs_tolerance = 0.0;
  /// Stop when every vertex is within this distance of the best one,
  /// measured in units of the initial step.
  double size_tolerance = 1e-12;
};

struct SimplexResult {
  std::vector<double> best;
  double value = 0.0;
  int evaluations = 0;
  bool reached_target = false;
};

/// Nelder-Mead downhill simplex (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). The starting simplex is `start` plus `step[i]` along axis i.
/// Deterministic: identical inputs give identical evaluation sequences.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> start, std::span<const double> step,
                          const SimplexOptions& opts);

}  // namespace movosc
