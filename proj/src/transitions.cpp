#include "movosc/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "movosc/errors.hpp"

namespace movosc {

namespace {

using cplx = std::complex<double>;

constexpr int kMaxRowLevel = 1'000'000;
constexpr double kMaxEnumeration = 1e7;

void check_gamma(double gamma) {
  if (!std::isfinite(gamma)) throw InvalidArgument("excitation parameter gamma must be finite");
  if (gamma < 0.0) throw InvalidArgument("excitation parameter gamma must be non-negative");
}

void check_level(int level) {
  if (level < 0) throw InvalidArgument("Fock level must be non-negative");
}

// log of t_n = gamma^(n-m) n! / (m! ((n-m)!)^2), the term-wise upper bound of
// P_mn for n > m.
double log_tail_term(int m, int n, double gamma) {
  return (n - m) * std::log(gamma) + std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
         2.0 * std::lgamma(n - m + 1.0);
}

void compositions(int level, int parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(level);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = level; k >= 0; --k) {
    current.push_back(k);
    compositions(level - k, parts - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

double laguerre_assoc(int n, int alpha, double x) {
  if (n < 0) throw InvalidArgument("laguerre_assoc: degree must be non-negative");
  if (alpha < 0) throw InvalidArgument("laguerre_assoc: alpha must be non-negative");
  if (n == 0) return 1.0;
  const double a = alpha;
  double prev = 1.0;
  double curr = 1.0 + a - x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0 + a - x) * curr - (k - 1.0 + a) * prev) / k;
    prev = curr;
    curr = next;
  }
  return curr;
}

double transition_probability(int m, int n, double gamma) {
  check_level(m);
  check_level(n);
  check_gamma(gamma);
  const int mu = std::min(m, n);
  const int nu = std::max(m, n);
  const int d = nu - mu;

  if (gamma == 0.0) return d == 0 ? 1.0 : 0.0;

  const double lag = laguerre_assoc(mu, d, gamma);
  double p;
  if (nu < 20 && gamma < 100.0) {
    double ratio = 1.0;
    for (int k = mu + 1; k <= nu; ++k) ratio *= k;
    p = std::pow(gamma, d) * std::exp(-gamma) * lag * lag / ratio;
  } else {
    if (lag == 0.0) return 0.0;
    const double log_p = std::lgamma(mu + 1.0) - std::lgamma(nu + 1.0) + d * std::log(gamma) -
                         gamma + 2.0 * std::log(std::abs(lag));
    p = std::exp(log_p);
  }
  return std::clamp(p, 0.0, 1.0);
}

cplx transition_amplitude(int m, int n, cplx u, double phi) {
  const double gamma = std::norm(u);
  const double p = transition_probability(m, n, gamma);
  const int mu = std::min(m, n);
  const int d = std::abs(m - n);
  const double lag = laguerre_assoc(mu, d, gamma);
  cplx direction = 1.0;
  if (d > 0) {
    if (gamma == 0.0) return {};
    // m >= n carries u^d, m < n carries (-u*)^d.
    const cplx unit = (m >= n ? u : -std::conj(u)) / std::abs(u);
    direction = std::pow(unit, d);
  }
  const double sign = lag < 0.0 ? -1.0 : 1.0;
  return sign * std::sqrt(p) * direction * std::polar(1.0, -phi);
}

cplx coherent_amplitude(cplx alpha, cplx beta, cplx u, double phi) {
  const cplx exponent = alpha * std::conj(beta) + alpha * u - std::conj(beta) * std::conj(u) -
                        0.5 * (std::norm(alpha) + std::norm(beta)) - 0.5 * std::norm(u) -
                        cplx(0.0, phi);
  return std::exp(exponent);
}

TransitionRow transition_row(int m, double gamma, double tail_epsilon) {
  check_level(m);
  check_gamma(gamma);
  if (!(tail_epsilon > 0.0 && tail_epsilon <= 1e-3)) {
    throw InvalidArgument("transition_row: tail_epsilon must lie in (0, 1e-3]");
  }

  TransitionRow row;
  row.m = m;
  row.gamma = gamma;

  int last = m;
  double bound = 0.0;
  if (gamma > 0.0) {
    last = std::max(m, static_cast<int>(std::ceil(gamma)) + m);
    for (;; ++last) {
      if (last > kMaxRowLevel) {
        std::ostringstream msg;
        msg << "transition_row: tail bound above " << tail_epsilon << " at level " << kMaxRowLevel;
        throw NumericalError(msg.str(), bound);
      }
      const int next = last + 1;
      const double ratio = gamma * (next + 1.0) / ((next + 1.0 - m) * (next + 1.0 - m));
      if (ratio >= 1.0) continue;
      bound = std::exp(log_tail_term(m, next, gamma)) / (1.0 - ratio);
      if (bound < tail_epsilon) break;
    }
  }

  row.probs.reserve(static_cast<std::size_t>(last) + 1);
  double sum = 0.0;
  for (int n = 0; n <= last; ++n) {
    row.probs.push_back(transition_probability(m, n, gamma));
    sum += row.probs.back();
  }
  row.tail_bound = bound;
  row.tail_mass = std::max(0.0, 1.0 - sum);
  return row;
}

TransitionTable transition_table(double gamma, int max_level) {
  check_gamma(gamma);
  check_level(max_level);
  TransitionTable table;
  table.gamma = gamma;
  table.max_level = max_level;
  const auto size = static_cast<std::size_t>(max_level) + 1;
  table.probs.assign(size, std::vector<double>(size, 0.0));
  table.tail_mass.assign(size, 0.0);
  for (int m = 0; m <= max_level; ++m) {
    double sum = 0.0;
    for (int n = 0; n <= max_level; ++n) {
      // Fill the upper triangle and mirror it so the table is exactly symmetric.
      if (n < m) {
        table.probs[m][n] = table.probs[n][m];
      } else {
        table.probs[m][n] = transition_probability(m, n, gamma);
      }
      sum += table.probs[m][n];
    }
    table.tail_mass[m] = std::max(0.0, 1.0 - sum);
  }
  return table;
}

double multi_axis_probability(std::span<const int> m, std::span<const int> n,
                              std::span<const double> axis_gamma) {
  if (m.size() != n.size() || m.size() != axis_gamma.size()) {
    throw InvalidArgument("multi_axis_probability: index and gamma vectors differ in length");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    p *= transition_probability(m[i], n[i], axis_gamma[i]);
  }
  return p;
}

DegenerateSpec::DegenerateSpec(std::vector<double> axis_gamma) : axis_gamma_(std::move(axis_gamma)) {
  if (axis_gamma_.empty()) throw InvalidArgument("DegenerateSpec needs at least one axis");
  for (double g : axis_gamma_) check_gamma(g);
  w_ = std::accumulate(axis_gamma_.begin(), axis_gamma_.end(), 0.0);
}

long long degeneracy(int level, int dimension) {
  check_level(level);
  if (dimension < 1) throw InvalidArgument("degeneracy: dimension must be positive");
  // C(level + dimension - 1, dimension - 1), in doubles to detect overflow.
  double c = 1.0;
  for (int k = 1; k < dimension; ++k) c = c * (level + k) / k;
  if (c > 9e18) throw ResourceError("degeneracy count overflows");
  return std::llround(c);
}

double degenerate_probability(int m_level, int n_level, const DegenerateSpec& spec,
                              DegeneracyConvention convention) {
  check_level(m_level);
  check_level(n_level);
  const int dim = spec.dimension();
  const double initial_count = static_cast<double>(degeneracy(m_level, dim));
  const double final_count = static_cast<double>(degeneracy(n_level, dim));
  if (initial_count * final_count > kMaxEnumeration) {
    std::ostringstream msg;
    msg << "degenerate_probability: " << initial_count * final_count
        << " substate pairs exceed the enumeration limit";
    throw ResourceError(msg.str());
  }

  std::vector<std::vector<int>> initial, final;
  std::vector<int> scratch;
  compositions(m_level, dim, scratch, initial);
  compositions(n_level, dim, scratch, final);

  double total = 0.0;
  for (const auto& a : initial) {
    for (const auto& b : final) total += multi_axis_probability(a, b, spec.axis_gamma());
  }
  if (convention == DegeneracyConvention::averaged) total /= initial_count;
  return total;
}

}  // namespace movosc
