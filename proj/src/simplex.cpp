#include "movosc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "movosc/errors.hpp"

namespace movosc {

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> start, std::span<const double> step,
                          const SimplexOptions& opts) {
  const std::size_t dim = start.size();
  if (step.size() != dim) throw InvalidArgument("nelder_mead: step and start differ in length");
  if (opts.max_evaluations < 1) throw InvalidArgument("nelder_mead: need at least one evaluation");

  SimplexResult result;
  auto evaluate = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> vertex(dim + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> value(dim + 1);
  value[0] = evaluate(vertex[0]);
  for (std::size_t i = 0; i < dim && result.evaluations < opts.max_evaluations; ++i) {
    vertex[i + 1][i] += step[i];
    value[i + 1] = evaluate(vertex[i + 1]);
  }
  const std::size_t filled = static_cast<std::size_t>(result.evaluations);

  auto finish = [&](std::size_t count) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i) {
      if (value[i] < value[best]) best = i;
    }
    result.best = vertex[best];
    result.value = value[best];
    result.reached_target = result.value < opts.target;
    return result;
  };
  if (dim == 0 || filled < dim + 1) return finish(filled);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto blend = [&](const std::vector<double>& from, const std::vector<double>& to, double t,
                   std::vector<double>& out) {
    for (std::size_t i = 0; i < dim; ++i) out[i] = from[i] + t * (to[i] - from[i]);
  };

  while (result.evaluations < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    if (value[best] < opts.target) break;
    const double spread = value[worst] - value[best];
    if (spread <= opts.rel_tolerance * std::abs(value[best]) + opts.abs_tolerance) break;
    double size = 0.0;
    for (std::size_t v = 0; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double scale = step[i] != 0.0 ? std::abs(step[i]) : 1.0;
        size = std::max(size, std::abs(vertex[v][i] - vertex[best][i]) / scale);
      }
    }
    if (size <= opts.size_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += vertex[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    blend(centroid, vertex[worst], -1.0, trial);  // reflection
    const double f_reflect = evaluate(trial);
    if (f_reflect < value[best]) {
      if (result.evaluations >= opts.max_evaluations) {
        vertex[worst] = trial;
        value[worst] = f_reflect;
        break;
      }
      blend(centroid, vertex[worst], -2.0, trial2);  // expansion
      const double f_expand = evaluate(trial2);
      if (f_expand < f_reflect) {
        vertex[worst] = trial2;
        value[worst] = f_expand;
      } else {
        vertex[worst] = trial;
        value[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < value[second]) {
      vertex[worst] = trial;
      value[worst] = f_reflect;
      continue;
    }
    if (result.evaluations >= opts.max_evaluations) break;

    // Contraction towards the better of the reflected and worst point.
    const bool outside = f_reflect < value[worst];
    blend(centroid, outside ? trial : vertex[worst], 0.5, trial2);
    const double f_contract = evaluate(trial2);
    if (f_contract < std::min(f_reflect, value[worst])) {
      vertex[worst] = trial2;
      value[worst] = f_contract;
      continue;
    }

    // Shrink towards the best vertex.
    for (std::size_t v = 0; v <= dim && result.evaluations < opts.max_evaluations; ++v) {
      if (v == best) continue;
      blend(vertex[best], vertex[v], 0.5, vertex[v]);
      value[v] = evaluate(vertex[v]);
    }
  }
  return finish(dim + 1);
}

}  // namespace movosc
