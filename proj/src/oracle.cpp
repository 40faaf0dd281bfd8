#include "movosc/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>

#include "movosc/errors.hpp"
#include "movosc/excitation.hpp"

namespace movosc::oracle {

namespace {

using cplx = std::complex<double>;

constexpr int kMaxFockLevel = 60;
constexpr std::size_t kMinPoints = 256;
constexpr int kEdgeCells = 4;

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlans {
 public:
  explicit FftPlans(std::vector<cplx>& buffer) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    const int n = static_cast<int>(buffer.size());
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) {
      destroy();
      throw ResourceError("failed to create FFT plans");
    }
  }
  ~FftPlans() { destroy(); }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward() const { fftw_execute(forward_); }
  void backward() const { fftw_execute(backward_); }

 private:
  void destroy() {
    std::lock_guard lock(planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
    forward_ = backward_ = nullptr;
  }

  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Checks that a packet of the given spatial half-extent and wavenumber
/// spread fits on the grid.
void require_fit(const Grid& grid, double center, double half_extent, double k_center,
                 double k_spread, const char* what) {
  const double margin = kEdgeCells * grid.dx();
  if (center - half_extent < grid.x_min() + margin || center + half_extent > grid.x_max() - margin) {
    std::ostringstream msg;
    msg << what << ": state extent [" << center - half_extent << ", " << center + half_extent
        << "] does not fit on grid [" << grid.x_min() << ", " << grid.x_max() << "]";
    throw ResourceError(msg.str());
  }
  if (std::abs(k_center) + k_spread > grid.k_max()) {
    std::ostringstream msg;
    msg << what << ": momentum content up to " << std::abs(k_center) + k_spread
        << " exceeds grid Nyquist wavenumber " << grid.k_max();
    throw ResourceError(msg.str());
  }
}

/// Normalized Hermite functions h_0..h_{n_max} at xi (unit norm in xi).
void hermite_functions(double xi, int n_max, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(n_max) + 1);
  out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  if (n_max >= 1) out[1] = std::sqrt(2.0) * xi * out[0];
  for (int n = 2; n <= n_max; ++n) {
    out[n] = std::sqrt(2.0 / n) * xi * out[n - 1] - std::sqrt((n - 1.0) / n) * out[n - 2];
  }
}

double velocity_squared_integral(const Trajectory& traj, int axis, double t) {
  if (t <= 0.0) return 0.0;
  constexpr int kIntervals = 4096;
  const double h = t / kIntervals;
  double sum = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double v = traj.eval(h * i, axis).velocity;
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * v * v;
  }
  return sum * h / 3.0;
}

void put_le(std::ostream& os, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  if (!is) throw InvalidArgument("snapshot: truncated data section");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(double x_min, double x_max, std::size_t points)
    : x_min_(x_min), x_max_(x_max), points_(points), dx_((x_max - x_min) / static_cast<double>(points)) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InvalidArgument("grid bounds must be finite with x_max > x_min");
  }
  if (points < kMinPoints || !is_power_of_two(points)) {
    throw InvalidArgument("grid size must be a power of two and at least 256");
  }
}

double Grid::k_max() const noexcept { return kPi / dx_; }

Grid Grid::for_trajectory(const Trajectory& traj, int axis, const OscillatorParams& params,
                          double t_final, int n_max, std::size_t points, double extra_extent) {
  constexpr int kSamples = 2049;
  double lo = 0.0, hi = 0.0, accel_integral = 0.0;
  const double h = t_final / (kSamples - 1);
  for (int i = 0; i < kSamples; ++i) {
    const Kinematics k = traj.eval(h * i, axis);
    lo = std::min(lo, k.position);
    hi = std::max(hi, k.position);
    if (i > 0) accel_integral += h * std::abs(k.acceleration);
  }
  const double width = params.ground_width();
  // |u| <= sqrt(M / 2 hbar omega) int |b''|, the packet center lags b by at most sqrt(2) |u| widths.
  const double lag = std::sqrt(2.0) * params.amplitude_scale() * accel_integral * width;
  const double extent = (8.0 + std::sqrt(2.0 * n_max + 1.0)) * width + lag + extra_extent;
  return Grid(lo - extent, hi + extent, points);
}

double GridState::norm() const {
  double s = 0.0;
  for (const cplx& v : psi) s += std::norm(v);
  return s * grid.dx();
}

cplx inner_product(const GridState& a, const GridState& b) {
  if (a.psi.size() != b.psi.size() || a.grid.x_min() != b.grid.x_min() ||
      a.grid.x_max() != b.grid.x_max()) {
    throw InvalidArgument("inner_product: states live on different grids");
  }
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.psi.size(); ++i) s += std::conj(a.psi[i]) * b.psi[i];
  return s * a.grid.dx();
}

// ---------------------------------------------------------------------------
// Analytic states

GridState fock_state(int n, double center, double boost_velocity, const OscillatorParams& params,
                     const Grid& grid) {
  if (n < 0 || n > kMaxFockLevel) throw InvalidArgument("fock_state: level must be in [0, 60]");
  const double width = params.ground_width();
  const double spread = std::sqrt(2.0 * n + 1.0);
  const double k_boost = params.mass() * boost_velocity / params.hbar();
  require_fit(grid, center, (spread + 6.0) * width, k_boost, (spread + 6.0) / width, "fock_state");

  GridState state{grid, std::vector<cplx>(grid.points()), 0.0};
  std::vector<double> h;
  const double inv_sqrt_width = 1.0 / std::sqrt(width);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double x = grid.x(i);
    hermite_functions((x - center) / width, n, h);
    state.psi[i] = h[static_cast<std::size_t>(n)] * inv_sqrt_width * std::polar(1.0, k_boost * x);
  }
  const double norm = std::sqrt(state.norm());
  for (cplx& v : state.psi) v /= norm;
  return state;
}

GridState coherent_state(cplx alpha, const OscillatorParams& params, const Grid& grid, double t,
                         CoherentFrame frame, const Trajectory* traj, int axis,
                         bool global_phases) {
  if (frame != CoherentFrame::fixed && traj == nullptr) {
    throw InvalidArgument("coherent_state: forced and moving frames need a trajectory");
  }
  const double omega = params.omega();
  const double width = params.ground_width();
  const cplx rotation = std::polar(1.0, -omega * t);

  cplx z = alpha * rotation;
  double center = 0.0;
  double k_boost = 0.0;
  double global_phase = 0.0;
  switch (frame) {
    case CoherentFrame::fixed:
      if (global_phases) global_phase = -0.5 * omega * t;
      break;
    case CoherentFrame::forced:
      z = rotation * (alpha - fixed_frame_delta(*traj, axis, params, t));
      break;
    case CoherentFrame::moving: {
      const Kinematics k = traj->eval(t, axis);
      center = k.position;
      k_boost = params.mass() * k.velocity / params.hbar();
      if (global_phases) {
        global_phase = -0.5 * omega * t -
                       0.5 * params.mass() / params.hbar() * velocity_squared_integral(*traj, axis, t);
      } else {
        // Boost phase referenced to the trap center instead of x = 0.
        global_phase = -k_boost * center;
      }
      break;
    }
  }

  const double mean = center + std::sqrt(2.0) * width * z.real();
  const double k_mean = k_boost + std::sqrt(2.0) * z.imag() / width;
  require_fit(grid, mean, 8.0 * width, k_mean, 8.0 / width, "coherent_state");

  GridState state{grid, std::vector<cplx>(grid.points()), t};
  const double prefactor = std::pow(kPi, -0.25) / std::sqrt(width);
  const cplx constant = -0.5 * z * z - 0.5 * std::norm(z) + cplx(0.0, global_phase);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double x = grid.x(i);
    const double xi = (x - center) / width;
    const cplx exponent = -0.5 * xi * xi + std::sqrt(2.0) * xi * z + constant + cplx(0.0, k_boost * x);
    state.psi[i] = prefactor * std::exp(exponent);
  }
  return state;
}

// ---------------------------------------------------------------------------
// Propagation

PropagationResult propagate(const GridState& initial, const Trajectory& traj, int axis,
                            const OscillatorParams& params, double t_final,
                            const PropagationConfig& cfg) {
  if (cfg.steps_per_period < 500) throw InvalidArgument("propagate: steps_per_period must be >= 500");
  if (!(t_final >= initial.t)) throw InvalidArgument("propagate: t_final precedes the state time");
  if (t_final > traj.duration() * (1.0 + 1e-12)) {
    throw RangeError("propagate: t_final beyond trajectory duration");
  }
  (void)traj.eval(0.0, axis);

  const Grid& grid = initial.grid;
  const std::size_t n = grid.points();
  PropagationResult result{initial, 0.0, 0};
  if (t_final == initial.t) return result;

  const double span = t_final - initial.t;
  const auto steps = static_cast<std::size_t>(std::ceil(span / params.period() * cfg.steps_per_period));
  const double dt = span / static_cast<double>(steps);

  const double hbar = params.hbar();
  const double mass = params.mass();
  const double spring = mass * params.omega() * params.omega();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double dk = kTwoPi / (grid.dx() * static_cast<double>(n));
  std::vector<cplx> kinetic_full(n), kinetic_half(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double index = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    const double k = dk * index;
    const double energy_rate = hbar * k * k / (2.0 * mass);
    // The 1/N of the unnormalized inverse FFT is folded in here.
    kinetic_full[j] = inv_n * std::polar(1.0, -energy_rate * dt);
    kinetic_half[j] = inv_n * std::polar(1.0, -0.5 * energy_rate * dt);
  }

  std::vector<cplx>& psi = result.state.psi;
  FftPlans fft(psi);
  const double norm0 = initial.norm();

  auto kinetic = [&](const std::vector<cplx>& factors) {
    fft.forward();
    for (std::size_t j = 0; j < n; ++j) psi[j] *= factors[j];
    fft.backward();
  };

  auto check = [&](double t_now) {
    double peak = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::norm(psi[j]);
      peak = std::max(peak, d);
      if (j < kEdgeCells || j >= n - kEdgeCells) edge = std::max(edge, d);
    }
    const double drift = std::abs(result.state.norm() - norm0);
    result.max_norm_drift = std::max(result.max_norm_drift, drift);
    if (drift > cfg.norm_tolerance) {
      std::ostringstream msg;
      msg << "propagate: norm drift " << drift << " at t = " << t_now;
      throw NumericalError(msg.str(), drift);
    }
    if (edge > cfg.boundary_threshold * peak) {
      std::ostringstream msg;
      msg << "propagate: wave packet reached the grid boundary at t = " << t_now;
      throw ResourceError(msg.str());
    }
  };

  const std::size_t check_every = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.steps_per_period / 20));
  kinetic(kinetic_half);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t_mid = initial.t + (static_cast<double>(s) + 0.5) * dt;
    const double b = traj.eval(std::min(t_mid, traj.duration()), axis).position;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = grid.x(j) - b;
      psi[j] *= std::polar(1.0, -0.5 * spring * d * d * dt / hbar);
    }
    kinetic(s + 1 < steps ? kinetic_full : kinetic_half);
    if ((s + 1) % check_every == 0) check(initial.t + (static_cast<double>(s) + 1.0) * dt);
  }
  result.state.t = t_final;
  result.steps = steps;
  check(t_final);
  return result;
}

TransitionMeasurement measure_transitions(const GridState& state, const Trajectory& traj, int axis,
                                          const OscillatorParams& params, int n_max) {
  if (n_max < 0 || n_max > kMaxFockLevel) {
    throw InvalidArgument("measure_transitions: n_max must be in [0, 60]");
  }
  const Kinematics k = traj.eval(std::min(state.t, traj.duration()), axis);
  const double width = params.ground_width();
  const double k_boost = params.mass() * k.velocity / params.hbar();
  const double spread = std::sqrt(2.0 * n_max + 1.0);
  require_fit(state.grid, k.position, (spread + 6.0) * width, k_boost, (spread + 6.0) / width,
              "measure_transitions");

  const auto levels = static_cast<std::size_t>(n_max) + 1;
  std::vector<cplx> overlap(levels, 0.0);
  std::vector<double> norms(levels, 0.0);
  std::vector<double> h;
  const double inv_sqrt_width = 1.0 / std::sqrt(width);
  for (std::size_t i = 0; i < state.grid.points(); ++i) {
    const double x = state.grid.x(i);
    hermite_functions((x - k.position) / width, n_max, h);
    const cplx weighted = std::polar(1.0, -k_boost * x) * state.psi[i];
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
      const double basis = h[lvl] * inv_sqrt_width;
      overlap[lvl] += basis * weighted;
      norms[lvl] += basis * basis;
    }
  }

  TransitionMeasurement out;
  out.probs.resize(levels);
  const double dx = state.grid.dx();
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    out.probs[lvl] = std::norm(overlap[lvl] * dx) / (norms[lvl] * dx);
    out.total += out.probs[lvl];
  }
  out.truncated = out.total < 0.999;
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

void write_snapshot(const GridState& state, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("write_snapshot: cannot open " + path.string());
  os.precision(17);
  os << "movosc-snapshot 1\n"
     << "points " << state.grid.points() << "\n"
     << "x_min " << state.grid.x_min() << "\n"
     << "x_max " << state.grid.x_max() << "\n"
     << "dx " << state.grid.dx() << "\n"
     << "t " << state.t << "\n"
     << "layout float64-le x re_psi im_psi\n"
     << "END_HEADER\n";
  for (std::size_t i = 0; i < state.psi.size(); ++i) {
    put_le(os, state.grid.x(i));
    put_le(os, state.psi[i].real());
    put_le(os, state.psi[i].imag());
  }
  if (!os) throw InvalidArgument("write_snapshot: write failed for " + path.string());
}

GridState read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("read_snapshot: cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  if (line != "movosc-snapshot 1") throw InvalidArgument("read_snapshot: not a snapshot file");
  std::size_t points = 0;
  double x_min = 0.0, x_max = 0.0, t = 0.0;
  while (std::getline(is, line) && line != "END_HEADER") {
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "points") fields >> points;
    else if (key == "x_min") fields >> x_min;
    else if (key == "x_max") fields >> x_max;
    else if (key == "t") fields >> t;
  }
  if (line != "END_HEADER") throw InvalidArgument("read_snapshot: missing END_HEADER");
  GridState state{Grid(x_min, x_max, points), std::vector<cplx>(points), t};
  for (std::size_t i = 0; i < points; ++i) {
    (void)get_le(is);
    const double re = get_le(is);
    const double im = get_le(is);
    state.psi[i] = {re, im};
  }
  return state;
}

}  // namespace movosc::oracle
