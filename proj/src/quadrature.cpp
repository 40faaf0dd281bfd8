#include "movosc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "movosc/errors.hpp"

namespace movosc {

void QuadratureConfig::validate() const {
  if (steps_per_period < 16) throw InvalidArgument("steps_per_period must be at least 16");
  if (!(tolerance > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
  if (max_depth < 1 || max_depth > 60) throw InvalidArgument("max_depth must be in [1, 60]");
}

namespace quadrature {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

cplx phase(double k, double x) { return std::polar(1.0, -k * x); }

struct SimpsonState {
  const RealFunction* f;
  double k;
  int max_depth;
  double error = 0.0;
  double unconverged = 0.0;
};

struct Sample {
  double x;
  cplx g;       // f(x) exp(-ikx)
  double absf;  // |f(x)|
};

Sample sample(const SimpsonState& st, double x) {
  const double fx = (*st.f)(x);
  return {x, fx * phase(st.k, x), std::abs(fx)};
}

cplx simpson_rule(const Sample& a, const Sample& m, const Sample& b) {
  return (b.x - a.x) / 6.0 * (a.g + 4.0 * m.g + b.g);
}

cplx refine(SimpsonState& st, const Sample& a, const Sample& m, const Sample& b, cplx whole,
            double tol, int depth) {
  const Sample lm = sample(st, 0.5 * (a.x + m.x));
  const Sample rm = sample(st, 0.5 * (m.x + b.x));
  const cplx left = simpson_rule(a, lm, m);
  const cplx right = simpson_rule(m, rm, b);
  const cplx delta = left + right - whole;
  const double err = std::abs(delta);
  const double mag = (b.x - a.x) / 6.0 * (a.absf + 4.0 * m.absf + b.absf);

  const bool converged = err <= 15.0 * tol;
  // exp(-ikx) carries a relative error of about eps * |k x|.
  const double phase_scale = 1.0 + std::abs(st.k) * std::max(std::abs(a.x), std::abs(b.x));
  const bool roundoff = err <= 64.0 * kEps * phase_scale * mag;
  const bool collapsed = !(lm.x > a.x && rm.x < b.x);
  if (converged || roundoff || collapsed || depth >= st.max_depth) {
    if (!converged && !roundoff) st.unconverged += err / 15.0;
    st.error += err / 15.0;
    return left + right + delta / 15.0;
  }
  return refine(st, a, lm, m, left, 0.5 * tol, depth + 1) +
         refine(st, m, rm, b, right, 0.5 * tol, depth + 1);
}

// Series for int_{-1}^{1} y^p cos(theta y) dy (p even) or y^p sin(theta y) (p odd).
double moment_series(int p, double theta) {
  const bool odd = (p % 2) != 0;
  double term = odd ? theta : 1.0;  // theta^(2j[+1]) / (2j[+1])!
  double sum = 0.0;
  for (int j = 0; j < 30; ++j) {
    const int q = odd ? 2 * j + 1 : 2 * j;
    const double contrib = term * 2.0 / static_cast<double>(q + p + 1);
    sum += (j % 2 == 0) ? contrib : -contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    term *= theta * theta / static_cast<double>((q + 1) * (q + 2));
  }
  return sum;
}

}  // namespace

std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                double max_panel) {
  if (!(max_panel > 0.0)) throw InvalidArgument("panel_edges: max_panel must be positive");
  return panel_edges(a, b, breakpoints, [max_panel](double, double) { return max_panel; });
}

std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                const std::function<double(double lo, double hi)>& max_panel) {
  if (!(b >= a)) throw InvalidArgument("panel_edges: b must not be less than a");
  std::vector<double> knots{a};
  for (double p : breakpoints) {
    if (p > a && p < b) knots.push_back(p);
  }
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  std::vector<double> edges{a};
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double lo = knots[i - 1];
    const double hi = knots[i];
    if (hi <= lo) continue;
    const double limit = max_panel(lo, hi);
    if (!(limit > 0.0)) throw InvalidArgument("panel_edges: max_panel must be positive");
    const double count = std::ceil((hi - lo) / limit);
    if (count > 5e8) throw ResourceError("panel_edges: too many quadrature panels requested");
    const auto n = static_cast<std::size_t>(std::max(1.0, count));
    for (std::size_t j = 1; j < n; ++j) {
      edges.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n));
    }
    edges.push_back(hi);
  }
  return edges;
}

CumulativeIntegral adaptive_simpson_cumulative(const RealFunction& f, double k,
                                               std::span<const double> edges,
                                               const QuadratureConfig& cfg) {
  CumulativeIntegral out;
  if (edges.empty()) return out;
  out.values.assign(edges.size(), cplx{});
  if (edges.size() < 2) return out;
  SimpsonState st{&f, k, cfg.max_depth};

  // First pass: Simpson on every panel, also giving the scale of the integrand.
  struct Panel {
    Sample a, m, b;
    cplx whole;
  };
  std::vector<Panel> panels;
  panels.reserve(edges.size() - 1);
  Sample left = sample(st, edges[0]);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const Sample right = sample(st, edges[i]);
    const Sample mid = sample(st, 0.5 * (left.x + right.x));
    panels.push_back({left, mid, right, simpson_rule(left, mid, right)});
    out.magnitude += (right.x - left.x) / 6.0 * (left.absf + 4.0 * mid.absf + right.absf);
    left = right;
  }

  const double span = edges.back() - edges.front();
  const double tol_abs = cfg.tolerance * std::max(out.magnitude, std::numeric_limits<double>::min());
  cplx running = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    const double share = span > 0.0 ? (p.b.x - p.a.x) / span : 1.0;
    running += refine(st, p.a, p.m, p.b, p.whole, tol_abs * share, 0);
    out.values[i + 1] = running;
  }
  out.error_estimate = st.error;
  if (st.unconverged > 10.0 * tol_abs) {
    std::ostringstream msg;
    msg << "adaptive Simpson did not converge: residual estimate " << st.unconverged
        << " exceeds target " << tol_abs;
    throw NumericalError(msg.str(), st.unconverged);
  }
  return out;
}

OscillatoryIntegral adaptive_simpson(const RealFunction& f, double k,
                                     std::span<const double> edges,
                                     const QuadratureConfig& cfg) {
  auto cumulative = adaptive_simpson_cumulative(f, k, edges, cfg);
  OscillatoryIntegral out;
  if (!cumulative.values.empty()) out.value = cumulative.values.back();
  out.error_estimate = cumulative.error_estimate;
  out.magnitude = cumulative.magnitude;
  return out;
}

FilonMoments filon_moments(double theta) {
  if (std::abs(theta) < 1.0) {
    return {moment_series(0, theta), cplx(0.0, -moment_series(1, theta)),
            moment_series(2, theta)};
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double t2 = theta * theta;
  return {2.0 * s / theta, cplx(0.0, -2.0 * (s - theta * c) / t2),
          2.0 * ((t2 - 2.0) * s + 2.0 * theta * c) / (t2 * theta)};
}

namespace {

// Filon over [x0, x0 + 2 n h] using nodes fx (size 2n+1) with spacing h.
cplx filon_run(std::span<const double> fx, double x0, double h, double k) {
  const FilonMoments mom = filon_moments(k * h);
  cplx sum = 0.0;
  for (std::size_t j = 0; j + 2 < fx.size(); j += 2) {
    const double f0 = fx[j], f1 = fx[j + 1], f2 = fx[j + 2];
    const double xm = x0 + h * static_cast<double>(j + 1);
    const cplx local = f1 * mom.m0 + 0.5 * (f2 - f0) * mom.m1 + 0.5 * (f2 - 2.0 * f1 + f0) * mom.m2;
    sum += h * phase(k, xm) * local;
  }
  return sum;
}

}  // namespace

OscillatoryIntegral composite_filon(const RealFunction& f, double k,
                                    std::span<const double> edges, int subdivisions) {
  if (subdivisions < 2 || subdivisions % 2 != 0) {
    throw InvalidArgument("composite_filon: subdivisions must be even and >= 2");
  }
  OscillatoryIntegral out;
  const auto n = static_cast<std::size_t>(subdivisions);
  std::vector<double> fx(n + 1);
  std::vector<double> coarse;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double a = edges[i - 1];
    const double b = edges[i];
    if (b <= a) continue;
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) fx[j] = f(a + h * static_cast<double>(j));
    const cplx fine = filon_run(fx, a, h, k);
    out.value += fine;

    double mag = 0.0;
    for (std::size_t j = 0; j + 2 <= n; j += 2) {
      mag += h / 3.0 * (std::abs(fx[j]) + 4.0 * std::abs(fx[j + 1]) + std::abs(fx[j + 2]));
    }
    out.magnitude += mag;

    if (n % 4 == 0) {
      coarse.clear();
      for (std::size_t j = 0; j <= n; j += 2) coarse.push_back(fx[j]);
      out.error_estimate += std::abs(fine - filon_run(coarse, a, 2.0 * h, k)) / 15.0;
    }
  }
  return out;
}

}  // namespace quadrature
}  // namespace movosc
