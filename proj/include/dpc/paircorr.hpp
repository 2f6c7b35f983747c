#pragma once

// Pair-correlation statistics over critical-line zeros: the weighted pair
// sums G and F_q, the exponential sum Sigma(x, T, v) and its integral
// representation, R_1 and its mean square, gap histograms, and the
// mean-value inequality for Fourier series.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "dpc/quadrature.hpp"
#include "dpc/zeros.hpp"

namespace dpc {

/// Which ordinates take part: |gamma| <= T or 0 < gamma <= T.
enum class Window { symmetric, positive };
bool in_window(double gamma, double T, Window window);
/// Ordinates inside (U, T] in absolute value (symmetric) or in (U, T] (positive).
bool in_annulus(double gamma, double U, double T, Window window);

/// 4 / (4 + u^2).
double weight_w(double u);

struct PairCorrInput {
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double x = 2;
  double T = 1;
  const ZeroSetMap* zeros = nullptr;  // one entry per character mod q
  Window window = Window::symmetric;
  unsigned threads = 1;

  /// gcd(a, q) = 1, x > 0, T > 0, and a certified set of height >= T for
  /// every character mod q.
  void validate() const;
};

/// Pooled ordinates of all characters mod q inside the window, each paired
/// with conj(chi(a)) of its character, sorted by ordinate.
struct WeightedZeros {
  std::vector<double> gamma;
  std::vector<std::complex<double>> coeff;
  std::size_t size() const noexcept { return gamma.size(); }
};
WeightedZeros weighted_zeros(const PairCorrInput& in);
/// Same, keeping only ordinates in the annulus U < |gamma| <= T.
WeightedZeros weighted_zeros(const PairCorrInput& in, double U);

/// sum_{i,j} c_i conj(c_j) x^{i(g_i - g_j)} W(g_i - g_j), rows summed from the
/// diagonal outward.
std::complex<double> weighted_pair_sum(const WeightedZeros& z, double x, unsigned threads = 1);

struct PairCorrResult {
  std::complex<double> value;
  std::uint64_t term_count = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double x = 0;
  double T = 0;
  /// |value| / (T (phi(q) log(qT))^2); NaN when log(qT) <= 0.
  double trivial_bound_ratio = 0;
};

/// G_{chi1, chi2}(x, T) over the two zero sets.
std::complex<double> g_pair(const ZeroSet& z1, const ZeroSet& z2, double x, double T,
                            Window window = Window::symmetric);
/// Same, looking the sets up by character label in `zeros`.
std::complex<double> g_pair(const CharacterLabel& chi1, const CharacterLabel& chi2, double x, double T,
                            const ZeroSetMap& zeros, Window window = Window::symmetric);

/// F_q(x, T): conj(chi1(a)) chi2(a) G_{chi1, chi2} summed over all ordered pairs.
PairCorrResult f_q(const PairCorrInput& in);

struct AsymptoticRatio {
  double main_term = 0;   // phi(q) T log x / pi
  double ratio = 0;       // Re F_q / main_term; NaN at x = 1
  bool in_range = false;  // q <= sqrt(x) / log^2 x and x / phi(q) <= T
};
/// Compares Re F_q with its conjectured main term under GRH.
AsymptoticRatio f_q_asymptotic_ratio(const PairCorrResult& r);

struct ZetaRatio {
  double F = 0;
  double ratio = 0;          // F 2 pi / (T log x); NaN at x = 1
  bool in_proven_range = false;  // 1 <= x <= T
};
/// Montgomery's F(x, T) for zeta (default window 0 < gamma <= T) and its
/// normalized ratio.
ZetaRatio f_zeta_ratio(double x, double T, const ZeroSet& zeta, Window window = Window::positive);

/// Sigma(x, T, v) = sum_chi conj(chi(a)) sum_gamma x^{i gamma} e^{i v gamma}.
std::complex<double> sigma_sum(const PairCorrInput& in, double v);
std::complex<double> sigma_sum(const WeightedZeros& z, double x, double v);

struct IntegralSpec {
  double V = 0;           // 0: extend until the truncation budget is met
  double budget = 1e-8;   // truncation bound relative to the integral
  QuadSpec quad{1e-11, 0, 0, 4'000'000};
};

struct IntegralResult {
  double value = 0;
  double V = 0;
  double truncation_bound = 0;  // (sum |c|)^2 e^{-2V}
  double quad_error = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// int |Sigma(x, T, v)|^2 e^{-2|v|} dv by adaptive quadrature on [-V, V].
IntegralResult f_q_via_integral(const PairCorrInput& in, const IntegralSpec& spec = {});
IntegralResult sigma_integral(const WeightedZeros& z, double x, const IntegralSpec& spec = {});

struct IncrementCheck {
  double lhs = 0;       // int |Sigma(T) - Sigma(U)|^2 e^{-2|v|} dv
  double rhs = 0;       // F_q(x, T) - F_q(x, U)
  double residual = 0;  // |lhs - rhs| / |rhs|
  /// Pair sum over the annulus U < |gamma_j| <= T, the exact value of lhs.
  double annulus_direct = 0;
  double annulus_residual = 0;  // |lhs - annulus_direct| / annulus_direct
  IntegralResult integral;
};
IncrementCheck increment_identity_check(const PairCorrInput& in, double U, const IntegralSpec& spec = {});

/// R_1(x, t) as a finite exponential sum over n <= cutoff in the class a mod q.
struct R1Terms {
  double x = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double cutoff = 0;
  double prefactor = 0;            // -phi(q) / sqrt(x)
  std::vector<double> frequency;   // log(x / n)
  std::vector<double> coeff;       // Lambda(n)(n/x)^{1/2} or Lambda(n)(x/n)^{3/2}
  double tail_budget = 0;          // bound on |omitted terms| times |prefactor|

  std::complex<double> operator()(double t) const;
};
R1Terms r1_terms(double x, std::uint64_t q, std::int64_t a, double cutoff);

struct R1Value {
  std::complex<double> value;
  double tail_budget = 0;
};
R1Value r1(double x, double t, std::uint64_t q, std::int64_t a, double cutoff);

struct R1MeanSquare {
  double integral = 0;       // int_{-T}^{T} |R_1|^2 dt
  double main_term = 0;      // 2T S(x) phi(q)^2 with S cut at the same point
  double ratio = 0;
  double s_value = 0;
  bool in_regime = false;    // T >= x / phi(q)
  std::size_t nodes = 0;
};
/// Composite Simpson with node spacing <= max_spacing (0: 0.25 / log x).
R1MeanSquare r1_mean_square(double x, double T, std::uint64_t q, std::int64_t a, double cutoff,
                            double max_spacing = 0);
R1MeanSquare r1_mean_square(const R1Terms& terms, double T, double max_spacing = 0);

/// 1 - (sin(pi u) / (pi u))^2.
double gue_density(double u);

struct SpacingHistogram {
  double alpha = 0, beta = 0;
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;   // ordered pairs per bin, diagonal included
  std::vector<double> expected;        // bin integral of the density times normalization
  double normalization = 0;            // T log T / (2 pi)
  bool includes_diagonal = false;      // 0 in [alpha, beta]
  std::uint64_t diagonal_pairs = 0;
  std::size_t diagonal_bin = 0;        // bin holding u = 0 when the diagonal is included
  double diagonal_expected = 0;        // normalization when the diagonal is included
  std::uint64_t total_pairs = 0;

  /// counts[i] without the diagonal pairs.
  std::uint64_t off_diagonal(std::size_t i) const {
    return counts[i] - (includes_diagonal && i == diagonal_bin ? diagonal_pairs : 0);
  }
};
/// Ordered pairs (g, g') from `ordinates` with (g - g') log T / (2 pi) in
/// [alpha, beta].
SpacingHistogram spacing_histogram(const std::vector<double>& ordinates, double T, double alpha, double beta,
                                   std::size_t bins);
SpacingHistogram spacing_histogram(const ZeroSet& set, double T, double alpha, double beta, std::size_t bins,
                                   Window window = Window::positive);

struct Frequency {
  double mu = 0;
  double c = 0;
};

struct MeanValueCheck {
  double exact = 0;          // int_{-T}^{T} |sum c e(mu t)|^2 dt in closed form
  double main_term = 0;      // 2T sum c^2
  double off_diagonal = 0;   // T sum_{0 < |mu - nu| < delta} |c(mu) c(nu)|
  double envelope_unit = 0;  // sum c^2 / delta + off_diagonal
  double measured_constant = 0;  // |exact - main| / envelope_unit
};
/// Requires 1/(2T) <= delta <= 1/2 and T >= 1.
MeanValueCheck mean_value_check(const std::vector<Frequency>& freqs, double T, double delta);

}  // namespace dpc
