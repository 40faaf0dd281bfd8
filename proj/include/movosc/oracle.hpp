#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "movosc/model.hpp"

namespace movosc::oracle {

/// Uniform periodic grid of `points` samples on [x_min, x_max).
class Grid {
 public:
  /// Throws InvalidArgument unless points is a power of two >= 256 and x_max > x_min.
  Grid(double x_min, double x_max, std::size_t points);

  /// Sized to hold the trajectory excursion on [0, t_final] plus
  /// 8 ground-state widths, the extent of Fock level `n_max`, and
  /// `extra_extent` (e.g. a coherent displacement) on both sides.
  static Grid for_trajectory(const Trajectory& traj, int axis, const OscillatorParams& params,
                             double t_final, int n_max, std::size_t points,
                             double extra_extent = 0.0);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t points() const noexcept { return points_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return x_min_ + dx_ * static_cast<double>(i); }
  /// Largest resolvable wavenumber pi / dx.
  double k_max() const noexcept;

 private:
  double x_min_;
  double x_max_;
  std::size_t points_;
  double dx_;
};

struct GridState {
  Grid grid;
  std::vector<std::complex<double>> psi;
  double t = 0.0;

  /// sum |psi|^2 dx
  double norm() const;
};

/// <a|b> = sum conj(a) b dx. Grids must match.
std::complex<double> inner_product(const GridState& a, const GridState& b);

/// Hermite function of order n centered at `center`, multiplied by the boost
/// phase exp(i M v x / hbar), renormalized on the grid. Throws InvalidArgument
/// for n > 60 and ResourceError when the state does not fit on the grid.
GridState fock_state(int n, double center, double boost_velocity, const OscillatorParams& params,
                     const Grid& grid);

enum class CoherentFrame {
  /// Unforced coherent state of the fixed oscillator, evolved to time t.
  fixed,
  /// Forced coherent state, displaced by the fixed-frame delta(t).
  forced,
  /// Moving-frame coherent state centered at b(t) with boost b'(t).
  moving,
};

/// Samples of a coherent state. `traj` is required for the forced and
/// moving frames. With `global_phases` the moving-frame state carries its
/// time-dependent global phase factors; probabilities never depend on them.
GridState coherent_state(std::complex<double> alpha, const OscillatorParams& params,
                         const Grid& grid, double t, CoherentFrame frame = CoherentFrame::fixed,
                         const Trajectory* traj = nullptr, int axis = 0,
                         bool global_phases = false);

struct PropagationConfig {
  int steps_per_period = 2000;
  /// Raise NumericalError when |norm - norm0| exceeds this.
  double norm_tolerance = 1e-6;
  /// Density at the outer 4 cells, relative to the peak, that counts as
  /// having reached the boundary.
  double boundary_threshold = 1e-10;
};

struct PropagationResult {
  GridState state;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
};

/// Strang-split propagation under H = p^2/2M + M omega^2 (x - b(t))^2 / 2:
/// half kinetic step (spectral), potential step at the midpoint time, half
/// kinetic step. Throws InvalidArgument for steps_per_period < 500,
/// NumericalError on norm drift and ResourceError when the packet reaches
/// the grid boundary.
PropagationResult propagate(const GridState& initial, const Trajectory& traj, int axis,
                            const OscillatorParams& params, double t_final,
                            const PropagationConfig& cfg = {});

struct TransitionMeasurement {
  std::vector<double> probs;  // |<n_t|psi>|^2, n = 0 .. n_max
  double total = 0.0;
  /// total < 0.999: raise n_max or the grid size.
  bool truncated = false;
};

/// Projects the state onto the moving-frame Fock states at time state.t.
TransitionMeasurement measure_transitions(const GridState& state, const Trajectory& traj,
                                          int axis, const OscillatorParams& params, int n_max);

/// Plain-text header (terminated by "END_HEADER\n") followed by
/// little-endian float64 triples (x, Re psi, Im psi).
void write_snapshot(const GridState& state, const std::filesystem::path& path);
GridState read_snapshot(const std::filesystem::path& path);

}  // namespace movosc::oracle
