#pragma once

#include <complex>
#include <span>
#include <vector>

namespace movosc {

/// Associated Laguerre polynomial L_n^(alpha)(x) by the forward three-term
/// recurrence k L_k = (2k - 1 + alpha - x) L_{k-1} - (k - 1 + alpha) L_{k-2}.
double laguerre_assoc(int n, int alpha, double x);

/// P_mn = (mu! / nu!) gamma^|m-n| exp(-gamma) [L_mu^(|m-n|)(gamma)]^2 with
/// mu = min(m, n), nu = max(m, n). Symmetric in (m, n) by construction.
double transition_probability(int m, int n, double gamma);

/// Transition amplitude A_mn between the evolved Fock state |m>_t and the
/// moving-frame Fock state |n>_t, with |A_mn|^2 = P_mn(|u|^2).
std::complex<double> transition_amplitude(int m, int n, std::complex<double> u, double phi);

/// Overlap <beta|alpha> of an evolved coherent state with a moving-frame
/// coherent state:
/// exp[alpha beta* + alpha u - beta* u* - (|alpha|^2 + |beta|^2)/2 - |u|^2/2 - i phi].
std::complex<double> coherent_amplitude(std::complex<double> alpha, std::complex<double> beta,
                                        std::complex<double> u, double phi);

/// One row m of P_mn, truncated at the first level where a rigorous bound on
/// the remaining mass drops below `tail_epsilon`.
struct TransitionRow {
  int m = 0;
  double gamma = 0.0;
  std::vector<double> probs;  // n = 0 .. probs.size() - 1
  /// Upper bound on sum_{n > N*} P_mn (from |L_n^(a)(x)| <= C(n+a, n) e^{x/2}).
  double tail_bound = 0.0;
  /// 1 - sum(probs), the missing mass by completeness, clamped at zero.
  double tail_mass = 0.0;
};

/// Throws InvalidArgument unless tail_epsilon is in (0, 1e-3]; NumericalError
/// when the bound has not converged by level 10^6.
TransitionRow transition_row(int m, double gamma, double tail_epsilon);

/// Square table P[m][n] for m, n <= max_level.
struct TransitionTable {
  double gamma = 0.0;
  int max_level = 0;
  std::vector<std::vector<double>> probs;
  /// Mass of each row beyond max_level, 1 - sum_n P[m][n].
  std::vector<double> tail_mass;
};

TransitionTable transition_table(double gamma, int max_level);

/// Product over axes of transition_probability(m_i, n_i, gamma_i).
double multi_axis_probability(std::span<const int> m, std::span<const int> n,
                              std::span<const double> axis_gamma);

/// Per-axis excitation parameters of an isotropic multi-dimensional
/// oscillator; w is their sum.
class DegenerateSpec {
 public:
  explicit DegenerateSpec(std::vector<double> axis_gamma);

  std::span<const double> axis_gamma() const noexcept { return axis_gamma_; }
  int dimension() const noexcept { return static_cast<int>(axis_gamma_.size()); }
  double w() const noexcept { return w_; }

 private:
  std::vector<double> axis_gamma_;
  double w_ = 0.0;
};

/// `summed` adds P over every (initial, final) substate pair; `averaged`
/// divides by the number of initial substates.
enum class DegeneracyConvention { summed, averaged };

/// Total probability between energy levels m_level and n_level, by explicit
/// enumeration of all multi-indices. Throws ResourceError when more than
/// 10^7 index pairs would be visited.
double degenerate_probability(int m_level, int n_level, const DegenerateSpec& spec,
                              DegeneracyConvention convention = DegeneracyConvention::summed);

/// Number of ways to split `level` quanta over `dimension` axes.
long long degeneracy(int level, int dimension);

}  // namespace movosc
