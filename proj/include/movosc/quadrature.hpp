#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace movosc {

enum class QuadratureScheme { adaptive_simpson, composite_filon };

struct QuadratureConfig {
  /// Minimum number of panels per shortest oscillation/trajectory timescale.
  int steps_per_period = 64;
  QuadratureScheme scheme = QuadratureScheme::adaptive_simpson;
  /// Absolute error target relative to the integral of |f|.
  double tolerance = 1e-11;
  int max_depth = 40;
  /// Also integrate the phase phi(t); costs nothing extra with Simpson.
  bool compute_phase = true;

  /// Throws InvalidArgument when steps_per_period < 16 or tolerance <= 0.
  void validate() const;
};

namespace quadrature {

using RealFunction = std::function<double(double)>;

struct OscillatoryIntegral {
  std::complex<double> value;
  double error_estimate = 0.0;
  /// Integral of |f| over the range, the scale the tolerance refers to.
  double magnitude = 0.0;
};

/// Panel edges covering [a, b]: every breakpoint inside (a, b) is an edge and
/// no panel is longer than `max_panel`.
std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                double max_panel);
/// As above with a panel limit per interval between consecutive breakpoints.
std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                const std::function<double(double lo, double hi)>& max_panel);

/// Running integral of f(x) exp(-i k x) from edges.front() to every edge.
struct CumulativeIntegral {
  std::vector<std::complex<double>> values;
  double error_estimate = 0.0;
  double magnitude = 0.0;
};

/// Cumulative form of adaptive_simpson; values[i] is the integral up to edges[i].
CumulativeIntegral adaptive_simpson_cumulative(const RealFunction& f, double k,
                                               std::span<const double> edges,
                                               const QuadratureConfig& cfg);

/// Integral of f(x) exp(-i k x) over [a, b], adaptive Simpson with Richardson
/// correction, started from the panels given by `edges`.
/// Throws NumericalError when the recursion depth is exhausted before the
/// requested accuracy is reached.
OscillatoryIntegral adaptive_simpson(const RealFunction& f, double k,
                                     std::span<const double> edges,
                                     const QuadratureConfig& cfg);

/// Integral of f(x) exp(-i k x) over [a, b] by composite Filon: on each pair
/// of sub-intervals f is replaced by its interpolating quadratic and the
/// product with the exponential is integrated exactly. Each panel in `edges`
/// is split into `subdivisions` (even) sub-intervals.
OscillatoryIntegral composite_filon(const RealFunction& f, double k,
                                    std::span<const double> edges, int subdivisions);

/// Moments int_{-1}^{1} y^p exp(-i theta y) dy for p = 0, 1, 2.
struct FilonMoments {
  std::complex<double> m0, m1, m2;
};
FilonMoments filon_moments(double theta);

}  // namespace quadrature
}  // namespace movosc
