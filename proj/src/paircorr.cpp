#include "dpc/paircorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dpc/error.hpp"
#include "dpc/numeric.hpp"
#include "dpc/parallel.hpp"
#include "dpc/sieve.hpp"

namespace dpc {

namespace {

constexpr double kPi = std::numbers::pi;

struct ComplexAccumulator {
  CompensatedSum<double> re, im;
  void add(std::complex<double> z) {
    re += z.real();
    im += z.imag();
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

double log_of_x(double x) {
  require(std::isfinite(x) && x > 0, "x must be positive and finite");
  return std::log(x);
}

// c_i x^{i gamma_i}
std::vector<std::complex<double>> phased(const WeightedZeros& z, double x) {
  const double lx = log_of_x(x);
  std::vector<std::complex<double>> e(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) e[i] = z.coeff[i] * std::polar(1.0, z.gamma[i] * lx);
  return e;
}

double sum_abs(const WeightedZeros& z) {
  CompensatedSum<double> s;
  for (const auto& c : z.coeff) s += std::abs(c);
  return s.value();
}

}  // namespace

bool in_window(double gamma, double T, Window window) {
  return window == Window::symmetric ? std::abs(gamma) <= T : (gamma > 0 && gamma <= T);
}

bool in_annulus(double gamma, double U, double T, Window window) {
  const double g = window == Window::symmetric ? std::abs(gamma) : gamma;
  return g > U && g <= T;
}

double weight_w(double u) { return 4.0 / (4.0 + u * u); }

void PairCorrInput::validate() const {
  require(q >= 1, "modulus must be at least 1");
  require(std::gcd(static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
                                              static_cast<std::int64_t>(q)),
                   q) == 1,
          "a = " + std::to_string(a) + " is not a unit mod " + std::to_string(q));
  require(std::isfinite(x) && x > 0, "x must be positive");
  require(std::isfinite(T) && T >= 0, "T must be nonnegative");
  require(zeros != nullptr, "pair correlation needs zero sets");
  for (const auto& chi : enumerate_characters(q)) certified_set(*zeros, chi.label(), T);
}

WeightedZeros weighted_zeros(const PairCorrInput& in, double U) {
  in.validate();
  struct Item {
    double gamma;
    std::complex<double> coeff;
  };
  std::vector<Item> items;
  for (const auto& chi : enumerate_characters(in.q)) {
    const auto c = std::conj(chi.value(in.a));
    for (const auto& r : certified_set(*in.zeros, chi.label(), in.T).records)
      if (U < 0 ? in_window(r.ordinate, in.T, in.window) : in_annulus(r.ordinate, U, in.T, in.window))
        items.push_back({r.ordinate, c});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& l, const Item& r) { return l.gamma < r.gamma; });
  WeightedZeros out;
  for (const auto& it : items) {
    out.gamma.push_back(it.gamma);
    out.coeff.push_back(it.coeff);
  }
  return out;
}

WeightedZeros weighted_zeros(const PairCorrInput& in) { return weighted_zeros(in, -1); }

std::complex<double> weighted_pair_sum(const WeightedZeros& z, double x, unsigned threads) {
  const auto e = phased(z, x);
  const std::size_t n = z.size();
  std::vector<std::complex<double>> rows(n);
  parallel_for(n, threads, [&](std::size_t i) {
    ComplexAccumulator acc;
    acc.add(std::conj(e[i]) * weight_w(0.0));
    for (std::size_t d = 1; d < n; ++d) {
      if (d <= i) acc.add(std::conj(e[i - d]) * weight_w(z.gamma[i] - z.gamma[i - d]));
      if (i + d < n) acc.add(std::conj(e[i + d]) * weight_w(z.gamma[i] - z.gamma[i + d]));
      if (d > i && i + d >= n) break;
    }
    rows[i] = e[i] * acc.value();
  });
  ComplexAccumulator total;
  for (const auto& r : rows) total.add(r);
  return total.value();
}

std::complex<double> g_pair(const ZeroSet& z1, const ZeroSet& z2, double x, double T, Window window) {
  for (const ZeroSet* s : {&z1, &z2}) {
    require(s->completeness.certified, "zero set for " + s->character.to_string() + " is not certified",
            Errc::not_certified);
    require(s->height >= T, "zero set for " + s->character.to_string() + " does not reach T");
  }
  const double lx = log_of_x(x);
  std::vector<double> g1, g2;
  for (const auto& r : z1.records)
    if (in_window(r.ordinate, T, window)) g1.push_back(r.ordinate);
  for (const auto& r : z2.records)
    if (in_window(r.ordinate, T, window)) g2.push_back(r.ordinate);
  ComplexAccumulator acc;
  for (const double a : g1) {
    ComplexAccumulator row;
    // Second list walked outward from the ordinate nearest to a.
    const auto mid = std::lower_bound(g2.begin(), g2.end(), a) - g2.begin();
    std::ptrdiff_t lo = mid - 1, hi = mid;
    const auto n2 = static_cast<std::ptrdiff_t>(g2.size());
    while (lo >= 0 || hi < n2) {
      std::ptrdiff_t j;
      if (lo < 0)
        j = hi++;
      else if (hi >= n2)
        j = lo--;
      else if (g2[static_cast<std::size_t>(hi)] - a <= a - g2[static_cast<std::size_t>(lo)])
        j = hi++;
      else
        j = lo--;
      const double d = a - g2[static_cast<std::size_t>(j)];
      row.add(std::polar(weight_w(d), d * lx));
    }
    acc.add(row.value());
  }
  return acc.value();
}

std::complex<double> g_pair(const CharacterLabel& chi1, const CharacterLabel& chi2, double x, double T,
                            const ZeroSetMap& zeros, Window window) {
  return g_pair(certified_set(zeros, chi1, T), certified_set(zeros, chi2, T), x, T, window);
}

PairCorrResult f_q(const PairCorrInput& in) {
  const auto z = weighted_zeros(in);
  PairCorrResult out;
  out.value = weighted_pair_sum(z, in.x, in.threads);
  out.term_count = static_cast<std::uint64_t>(z.size()) * z.size();
  out.q = in.q;
  out.a = in.a;
  out.x = in.x;
  out.T = in.T;
  const double lqt = std::log(static_cast<double>(in.q) * in.T);
  const double phi = static_cast<double>(euler_phi(in.q));
  out.trivial_bound_ratio = lqt > 0 ? std::abs(out.value) / (in.T * std::pow(phi * lqt, 2))
                                    : std::numeric_limits<double>::quiet_NaN();
  return out;
}

AsymptoticRatio f_q_asymptotic_ratio(const PairCorrResult& r) {
  AsymptoticRatio out;
  const double phi = static_cast<double>(euler_phi(r.q));
  const double lx = std::log(r.x);
  out.main_term = phi * r.T * lx / std::numbers::pi;
  out.ratio = lx > 0 ? r.value.real() / out.main_term : std::numeric_limits<double>::quiet_NaN();
  out.in_range = lx > 0 && static_cast<double>(r.q) <= std::sqrt(r.x) / (lx * lx) && r.x / phi <= r.T;
  return out;
}

ZetaRatio f_zeta_ratio(double x, double T, const ZeroSet& zeta, Window window) {
  require(zeta.character.modulus == 1, "f_zeta_ratio needs the zeta zero set");
  require(x >= 1, "f_zeta_ratio needs x >= 1");
  ZetaRatio out;
  out.F = g_pair(zeta, zeta, x, T, window).real();
  out.ratio = x == 1 ? std::numeric_limits<double>::quiet_NaN() : out.F * 2 * kPi / (T * std::log(x));
  out.in_proven_range = x <= T;
  return out;
}

std::complex<double> sigma_sum(const WeightedZeros& z, double x, double v) {
  const double lx = log_of_x(x);
  ComplexAccumulator acc;
  for (std::size_t i = 0; i < z.size(); ++i) acc.add(z.coeff[i] * std::polar(1.0, z.gamma[i] * (lx + v)));
  return acc.value();
}

std::complex<double> sigma_sum(const PairCorrInput& in, double v) { return sigma_sum(weighted_zeros(in), in.x, v); }

IntegralResult sigma_integral(const WeightedZeros& z, double x, const IntegralSpec& spec) {
  require(spec.budget > 0, "truncation budget must be positive");
  require(spec.V >= 0, "truncation V must be nonnegative");
  IntegralResult out;
  if (z.size() == 0) {
    out.converged = true;
    out.V = spec.V;
    return out;
  }
  const auto e = phased(z, x);
  const std::size_t n = z.size();
  auto integrand = [&](double v) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = v * z.gamma[i];
      const double c = std::cos(ang), s = std::sin(ang);
      re += e[i].real() * c - e[i].imag() * s;
      im += e[i].real() * s + e[i].imag() * c;
    }
    return (re * re + im * im) * std::exp(-2 * std::abs(v));
  };

  const double s1 = sum_abs(z);
  const double spread = z.gamma.back() - z.gamma.front();
  const double log_xt = std::log(std::max(std::numbers::e, x * std::max(std::abs(z.gamma.front()), std::abs(z.gamma.back()))));
  QuadSpec q = spec.quad;
  q.initial_width = std::min(0.2 / log_xt, spread > 0 ? kPi / (2 * spread) : 0.2 / log_xt);

  auto piece = [&](double lo, double hi, const QuadSpec& qs) {
    const auto r = integrate_adaptive(integrand, lo, hi, qs);
    out.quad_error += r.error;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
    return r.value;
  };

  out.converged = true;
  double V = spec.V > 0 ? spec.V : std::max(2.0, 0.5 * std::log(s1 / spec.budget));
  double value = piece(-V, 0, q) + piece(0, V, q);
  auto bound = [&](double v) { return s1 * s1 * std::exp(-2 * v); };
  if (spec.V > 0) {
    require(bound(V) <= spec.budget * value,
            "truncation at V = " + std::to_string(V) + " leaves up to " + std::to_string(bound(V)) +
                ", above the budget " + std::to_string(spec.budget * value));
  } else {
    while (bound(V) > spec.budget * value) {
      const double next = V + std::max(0.5, 0.5 * std::log(bound(V) / (spec.budget * value)) + 0.25);
      require(next <= 80, "truncation budget unreachable below V = 80");
      QuadSpec tail = q;
      tail.abs_tol = spec.quad.rel_tol * value;
      tail.rel_tol = 0;
      value += piece(-next, -V, tail) + piece(V, next, tail);
      V = next;
    }
  }
  out.value = value;
  out.V = V;
  out.truncation_bound = bound(V);
  return out;
}

IntegralResult f_q_via_integral(const PairCorrInput& in, const IntegralSpec& spec) {
  return sigma_integral(weighted_zeros(in), in.x, spec);
}

IncrementCheck increment_identity_check(const PairCorrInput& in, double U, const IntegralSpec& spec) {
  require(U >= 0 && U <= in.T, "increment check needs 0 <= U <= T");
  IncrementCheck out;
  const auto annulus = weighted_zeros(in, U);
  out.integral = sigma_integral(annulus, in.x, spec);
  out.lhs = out.integral.value;
  out.annulus_direct = weighted_pair_sum(annulus, in.x, in.threads).real();
  const double f_t = f_q(in).value.real();
  double f_u = 0;
  if (U > 0) {
    PairCorrInput lower = in;
    lower.T = U;
    f_u = f_q(lower).value.real();
  }
  out.rhs = f_t - f_u;
  auto rel = [](double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
  };
  out.residual = rel(out.lhs, out.rhs);
  out.annulus_residual = rel(out.lhs, out.annulus_direct);
  return out;
}

std::complex<double> R1Terms::operator()(double t) const {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    const double ang = t * frequency[i];
    re += coeff[i] * std::cos(ang);
    im += coeff[i] * std::sin(ang);
  }
  return prefactor * std::complex<double>(re, im);
}

R1Terms r1_terms(double x, std::uint64_t q, std::int64_t a, double cutoff) {
  require(std::isfinite(x) && x >= 2, "R_1 needs x >= 2");
  require(cutoff >= 8 * x, "R_1 tail cutoff must be at least 8x");
  const std::uint64_t r = unit_residue(a, q);
  R1Terms out;
  out.x = x;
  out.q = q;
  out.a = a;
  out.cutoff = cutoff;
  const double phi = static_cast<double>(euler_phi(q));
  out.prefactor = -phi / std::sqrt(x);
  for_each_prime_power(2, static_cast<std::uint64_t>(std::floor(cutoff)), [&](std::span<const PrimePower> b) {
    for (const auto& e : b) {
      if (e.n % q != r) continue;
      const double n = static_cast<double>(e.n);
      out.frequency.push_back(std::log(x / n));
      out.coeff.push_back(n <= x ? e.log_p() * std::sqrt(n / x) : e.log_p() * std::pow(x / n, 1.5));
    }
  });
  // sum_{n > C} Lambda(n) n^{-3/2} <= 1.04 * 3 / sqrt(C) by partial summation.
  out.tail_budget = phi * x * 3.12 / std::sqrt(cutoff);
  return out;
}

R1Value r1(double x, double t, std::uint64_t q, std::int64_t a, double cutoff) {
  const auto terms = r1_terms(x, q, a, cutoff);
  return {terms(t), terms.tail_budget};
}

R1MeanSquare r1_mean_square(const R1Terms& terms, double T, double max_spacing) {
  require(std::isfinite(T) && T > 0, "mean square needs T > 0");
  const double h = max_spacing > 0 ? max_spacing : 0.25 / std::log(terms.x);
  const auto quad = integrate_simpson([&](double t) { return std::norm(terms(t)); }, -T, T, h);
  R1MeanSquare out;
  out.integral = quad.value;
  out.nodes = quad.evaluations;
  out.s_value = s_of_x(terms.x, terms.q, terms.a, terms.cutoff).value;
  const double phi = static_cast<double>(euler_phi(terms.q));
  out.main_term = 2 * T * out.s_value * phi * phi;
  out.ratio = out.integral / out.main_term;
  out.in_regime = T >= terms.x / phi;
  return out;
}

R1MeanSquare r1_mean_square(double x, double T, std::uint64_t q, std::int64_t a, double cutoff, double max_spacing) {
  return r1_mean_square(r1_terms(x, q, a, cutoff), T, max_spacing);
}

double gue_density(double u) {
  const double pu = kPi * u;
  if (std::abs(pu) < 1e-4) return pu * pu / 3 - 2 * std::pow(pu, 4) / 45;
  const double s = std::sin(pu) / pu;
  return 1 - s * s;
}

SpacingHistogram spacing_histogram(const std::vector<double>& ordinates, double T, double alpha, double beta,
                                   std::size_t bins) {
  require(alpha < beta, "histogram needs alpha < beta");
  require(bins >= 1, "histogram needs at least one bin");
  require(T > 1, "histogram normalization needs T > 1");
  SpacingHistogram out;
  out.alpha = alpha;
  out.beta = beta;
  const double width = (beta - alpha) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) out.edges.push_back(i == bins ? beta : alpha + width * static_cast<double>(i));
  out.counts.assign(bins, 0);
  const double scale = std::log(T) / (2 * kPi);
  out.normalization = T * std::log(T) / (2 * kPi);
  out.includes_diagonal = alpha <= 0 && 0 <= beta;
  for (const double g : ordinates)
    for (const double h : ordinates) {
      const double u = (g - h) * scale;
      if (u < alpha || u > beta) continue;
      auto bin = static_cast<std::size_t>((u - alpha) / width);
      if (bin >= bins) bin = bins - 1;
      ++out.counts[bin];
      ++out.total_pairs;
    }
  if (out.includes_diagonal) {
    out.diagonal_pairs = ordinates.size();
    out.diagonal_bin = std::min(bins - 1, static_cast<std::size_t>((0 - alpha) / width));
    out.diagonal_expected = out.normalization;
  }
  for (std::size_t i = 0; i < bins; ++i) {
    const auto r = integrate_adaptive(gue_density, out.edges[i], out.edges[i + 1], {1e-12, 1e-15, 0, 10000});
    out.expected.push_back(r.value * out.normalization);
  }
  return out;
}

SpacingHistogram spacing_histogram(const ZeroSet& set, double T, double alpha, double beta, std::size_t bins,
                                   Window window) {
  require(set.height >= T, "zero set does not reach T");
  std::vector<double> g;
  for (const auto& r : set.records)
    if (in_window(r.ordinate, T, window)) g.push_back(r.ordinate);
  return spacing_histogram(g, T, alpha, beta, bins);
}

MeanValueCheck mean_value_check(const std::vector<Frequency>& freqs, double T, double delta) {
  require(std::isfinite(T) && T >= 1, "mean-value check needs T >= 1");
  require(delta >= 1 / (2 * T) && delta <= 0.5, "delta must lie in [1/(2T), 1/2]");
  std::vector<Frequency> f = freqs;
  std::sort(f.begin(), f.end(), [](const Frequency& l, const Frequency& r) { return l.mu < r.mu; });
  for (std::size_t i = 1; i < f.size(); ++i)
    require(f[i].mu != f[i - 1].mu, "frequencies must be distinct");
  CompensatedSum<double> exact, sq, off;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sq += f[i].c * f[i].c;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double cc = f[i].c * f[j].c;
      if (i == j) {
        exact += 2 * T * cc;
        continue;
      }
      const double theta = f[i].mu - f[j].mu;
      exact += cc * std::sin(2 * kPi * theta * T) / (kPi * theta);
      if (std::abs(theta) < delta) off += T * std::abs(cc);
    }
  }
  MeanValueCheck out;
  out.exact = exact.value();
  out.main_term = 2 * T * sq.value();
  out.off_diagonal = off.value();
  out.envelope_unit = sq.value() / delta + out.off_diagonal;
  out.measured_constant = out.envelope_unit > 0 ? std::abs(out.exact - out.main_term) / out.envelope_unit : 0;
  return out;
}

}  // namespace dpc
