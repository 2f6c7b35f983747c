#include "dpc/lfunc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dpc/error.hpp"

namespace dpc {

namespace {

// B_{2k} / (2k)! for k = 1..15.
constexpr std::array<long double, 15> kBernoulliOverFactorial = [] {
  constexpr std::array<long double, 15> num = {1.0L,
                                               -1.0L,
                                               1.0L,
                                               -1.0L,
                                               5.0L,
                                               -691.0L,
                                               7.0L,
                                               -3617.0L,
                                               43867.0L,
                                               -174611.0L,
                                               854513.0L,
                                               -236364091.0L,
                                               8553103.0L,
                                               -23749461029.0L,
                                               8615841276005.0L};
  constexpr std::array<long double, 15> den = {6.0L,   30.0L,  42.0L,   30.0L, 66.0L,
                                               2730.0L, 6.0L,  510.0L,  798.0L, 330.0L,
                                               138.0L, 2730.0L, 6.0L,   870.0L, 14322.0L};
  std::array<long double, 15> out{};
  long double fact = 1.0L;
  for (int k = 1; k <= 15; ++k) {
    fact *= static_cast<long double>((2 * k - 1) * (2 * k));
    out[static_cast<std::size_t>(k - 1)] = num[static_cast<std::size_t>(k - 1)] /
                                           den[static_cast<std::size_t>(k - 1)] / fact;
  }
  return out;
}();

constexpr int kMaxBernoulliTerms = 14;

// expm1(z) / z
template <class R>
std::complex<R> expm1_over(std::complex<R> z) {
  if (std::abs(z) < R(1e-3)) return R(1) + z / R(2) + z * z / R(6) + z * z * z / R(24);
  return (std::exp(z) - R(1)) / z;
}

// Euler-Maclaurin tail of zeta(s, a) beyond the first N terms. With
// `regularized`, the pole term w^{1-s}/(s-1) is replaced by (w^{1-s}-1)/(s-1).
template <class R>
std::complex<R> em_tail(std::complex<R> s, R w, int bernoulli_terms, bool regularized) {
  const R lw = std::log(w);
  const std::complex<R> wms = std::exp(-s * lw);
  std::complex<R> tail;
  if (regularized)
    tail = -lw * expm1_over<R>((R(1) - s) * lw);
  else
    tail = w * wms / (s - R(1));
  tail += wms / R(2);
  std::complex<R> poch = s;
  std::complex<R> wpow = wms / w;
  for (int k = 1; k <= bernoulli_terms; ++k) {
    tail += static_cast<R>(kBernoulliOverFactorial[static_cast<std::size_t>(k - 1)]) * poch * wpow;
    poch *= (s + R(2 * k - 1)) * (s + R(2 * k));
    wpow /= w * w;
  }
  return tail;
}

template <class R>
std::complex<R> hurwitz_kernel(std::complex<R> s, R a, int direct_terms, int bernoulli_terms,
                               bool regularized) {
  std::complex<R> direct;
  for (int n = 0; n < direct_terms; ++n) direct += std::exp(-s * std::log(R(n) + a));
  return direct + em_tail<R>(s, R(direct_terms) + a, bernoulli_terms, regularized);
}

void check_budget(std::complex<double> s, double a, const EvalPrecision& prec) {
  require(prec.bernoulli_terms >= 1 && prec.bernoulli_terms <= kMaxBernoulliTerms,
          "bernoulli_terms must be in [1, 14]");
  require(prec.direct_terms >= 1, "direct_terms must be positive");
  const double bound = em_remainder_bound(s, a, prec.direct_terms, prec.bernoulli_terms);
  if (!(bound <= prec.target_abs_error))
    throw Error(Errc::precision_unreachable, prec.describe(s) + " remainder bound " +
                                                 std::to_string(bound) + " exceeds target");
}

template <class R>
std::complex<R> l_hurwitz_impl(const DirichletCharacter& chi, std::complex<R> s,
                               const EvalPrecision& prec) {
  const std::uint64_t q = chi.modulus();
  if (chi.is_principal() && s == std::complex<R>(1))
    throw Error(Errc::pole, "L(s, chi) has a pole at s = 1 for principal chi");
  std::complex<R> acc;
  for (std::uint64_t a = 1; a <= q; ++a) {
    const CharValue v = chi(static_cast<std::int64_t>(a));
    if (!v) continue;
    const R shift = R(a) / R(q);
    check_budget({static_cast<double>(s.real()), static_cast<double>(s.imag())}, static_cast<double>(shift), prec);
    acc += v->value_as<R>() *
           hurwitz_kernel<R>(s, shift, prec.direct_terms, prec.bernoulli_terms, /*regularized=*/true);
  }
  if (chi.is_principal()) acc += R(euler_phi(q)) / (s - R(1));
  return std::exp(-s * std::log(R(q))) * acc;
}

template <class R>
std::complex<R> log_gamma_impl(std::complex<R> z) {
  require(z.real() > 0, "log_gamma needs Re z > 0");
  std::complex<R> shift;
  while (z.real() < R(15)) {
    shift += std::log(z);
    z += R(1);
  }
  const R half_log_two_pi = R(0.918938533204672741780329736405617639861L);
  std::complex<R> res = (z - R(0.5)) * std::log(z) - z + half_log_two_pi;
  const std::complex<R> inv = R(1) / z;
  const std::complex<R> inv2 = inv * inv;
  std::complex<R> pw = inv;
  // B_{2k} / (2k (2k-1)) z^{1-2k}
  for (int k = 1; k <= 10; ++k) {
    const long double b2k = kBernoulliOverFactorial[static_cast<std::size_t>(k - 1)];
    long double fact = 1.0L;
    for (int i = 2; i <= 2 * k; ++i) fact *= i;
    res += static_cast<R>(b2k * fact / ((2.0L * k) * (2.0L * k - 1.0L))) * pw;
    pw *= inv2;
  }
  return res - shift;
}

template <class R>
R theta_impl(std::uint64_t q, int parity, R t) {
  const R pi = std::numbers::pi_v<R>;
  const std::complex<R> z((R(0.5) + R(parity)) / R(2), t / R(2));
  return t / R(2) * std::log(R(q) / pi) + log_gamma_impl<R>(z).imag();
}

bool realness_ok(std::complex<double> z) { return std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z.real())); }

}  // namespace

// ---------------------------------------------------------------------------

EvalPrecision EvalPrecision::for_height(double height, double target, int bernoulli_terms) {
  require(height >= 0 && std::isfinite(height), "height must be finite and non-negative");
  require(target > 0, "target error must be positive");
  EvalPrecision p;
  p.target_abs_error = target;
  p.bernoulli_terms = bernoulli_terms;
  p.direct_terms = static_cast<int>(std::ceil((height + 10.0) / 2.0));
  const std::complex<double> worst(0.5, height);
  while (em_remainder_bound(worst, 0.0, p.direct_terms, bernoulli_terms) > target) {
    require(p.direct_terms < 10'000'000, "no direct_terms meet the target",
            Errc::precision_unreachable);
    p.direct_terms = static_cast<int>(std::ceil(p.direct_terms * 1.25));
  }
  return p;
}

EvalPrecision EvalPrecision::doubled() const {
  EvalPrecision p = *this;
  p.direct_terms *= 2;
  return p;
}

std::string EvalPrecision::describe(std::complex<double> s) const {
  std::ostringstream os;
  os.precision(6);
  os << "lfunc.budget s=(" << s.real() << "," << s.imag() << ") N=" << direct_terms
     << " M=" << bernoulli_terms << " target=" << target_abs_error
     << " bound=" << em_remainder_bound(s, 0.0, direct_terms, bernoulli_terms);
  return os.str();
}

double em_remainder_bound(std::complex<double> s, double a, int direct_terms, int bernoulli_terms) {
  const double sigma = s.real();
  const int m = bernoulli_terms;
  if (sigma + 2 * m + 1 <= 0) return std::numeric_limits<double>::infinity();
  const double w = direct_terms + a;
  // |(s)_{2M+1} B_{2M+2}/(2M+2)! w^{-s-2M-1}| * |s+2M+1| / (sigma+2M+1), in logs
  double log_bound = std::log(std::fabs(static_cast<double>(kBernoulliOverFactorial[static_cast<std::size_t>(m)])));
  for (int k = 0; k <= 2 * m; ++k) log_bound += std::log(std::abs(s + static_cast<double>(k)));
  log_bound -= (sigma + 2 * m + 1) * std::log(w);
  log_bound += std::log(std::abs(s + static_cast<double>(2 * m + 1))) - std::log(sigma + 2 * m + 1);
  return std::exp(log_bound);
}

std::complex<double> hurwitz_zeta(std::complex<double> s, double a, const EvalPrecision& prec) {
  require(a > 0.0 && a <= 1.0, "hurwitz_zeta needs 0 < a <= 1");
  if (s == std::complex<double>(1.0, 0.0)) throw Error(Errc::pole, "zeta(s, a) has a pole at s = 1");
  check_budget(s, a, prec);
  return hurwitz_kernel<double>(s, a, prec.direct_terms, prec.bernoulli_terms, false);
}

std::complex<double> l_value_hurwitz(const DirichletCharacter& chi, std::complex<double> s,
                                     const EvalPrecision& prec) {
  return l_hurwitz_impl<double>(chi, s, prec);
}

std::complex<double> l_value(const DirichletCharacter& chi, std::complex<double> s,
                             const EvalPrecision& prec) {
  if (chi.is_primitive()) return l_value_hurwitz(chi, s, prec);
  if (chi.is_principal() && s == std::complex<double>(1.0, 0.0))
    throw Error(Errc::pole, "L(s, chi) has a pole at s = 1 for principal chi");
  const auto [qstar, star] = conductor_and_inducer(chi);
  std::complex<double> value = l_value_hurwitz(star, s, prec);
  for (const auto& [p, e] : factorize(chi.modulus())) {
    const CharValue v = star(static_cast<std::int64_t>(p));
    if (!v) continue;
    value *= 1.0 - v->value() * std::exp(-s * std::log(static_cast<double>(p)));
  }
  return value;
}

std::complex<double> root_number(const DirichletCharacter& chi) {
  require(chi.is_primitive(), "root number needs a primitive character, got " + chi.label().to_string());
  const std::complex<double> i_pow_a = chi.parity() == 0 ? 1.0 : std::complex<double>(0.0, 1.0);
  return gauss_sum(chi) / (i_pow_a * std::sqrt(static_cast<double>(chi.modulus())));
}

CompletedLParams::CompletedLParams(const DirichletCharacter& chi)
    : character(chi), parity(chi.parity()), root_number(dpc::root_number(chi)) {
  std::complex<double> eps = root_number;
  if (std::fabs(eps.imag()) < 1e-15) eps.imag(0.0);
  rotation = std::conj(std::sqrt(eps));
}

std::complex<double> log_gamma(std::complex<double> z) { return log_gamma_impl<double>(z); }
std::complex<long double> log_gamma(std::complex<long double> z) { return log_gamma_impl<long double>(z); }

double hardy_theta(const CompletedLParams& params, double t) {
  return theta_impl<double>(params.character.modulus(), params.parity, t);
}

double hardy_z(const DirichletCharacter& chi, double t, const EvalPrecision& prec) {
  const CompletedLParams params(chi);
  const std::complex<double> s(0.5, t);
  const std::complex<double> l = l_value_hurwitz(chi, s, prec);
  const std::complex<double> z = params.rotation * std::polar(1.0, hardy_theta(params, t)) * l;
  if (realness_ok(z)) return z.real();
  // extended precision retry
  using LD = long double;
  const std::complex<LD> sl(0.5L, static_cast<LD>(t));
  const std::complex<LD> ll = l_hurwitz_impl<LD>(chi, sl, prec);
  const std::complex<LD> rot(params.rotation.real(), params.rotation.imag());
  const std::complex<LD> zl =
      rot * std::polar(1.0L, theta_impl<LD>(chi.modulus(), params.parity, static_cast<LD>(t))) * ll;
  const std::complex<double> zd(static_cast<double>(zl.real()), static_cast<double>(zl.imag()));
  if (!realness_ok(zd))
    throw Error(Errc::realness_violation, "Z(t) not real at t=" + std::to_string(t) + " for " +
                                              chi.label().to_string() + ", residual " +
                                              std::to_string(zd.imag()));
  return zd.real();
}

// ---------------------------------------------------------------------------

HardyZEvaluator::HardyZEvaluator(const DirichletCharacter& chi, double height, double target_abs_error)
    : params_(chi),
      prec_(EvalPrecision::for_height(height, target_abs_error)),
      height_(height),
      log_q_(std::log(static_cast<double>(chi.modulus()))) {
  const std::uint64_t q = chi.modulus();
  for (std::uint64_t a = 1; a <= q; ++a) {
    const CharValue v = chi(static_cast<std::int64_t>(a));
    if (!v) continue;
    Residue r;
    r.chi = v->value();
    r.shift = static_cast<double>(a) / static_cast<double>(q);
    r.log_w.resize(static_cast<std::size_t>(prec_.direct_terms));
    r.inv_sqrt_w.resize(r.log_w.size());
    for (int n = 0; n < prec_.direct_terms; ++n) {
      const double w = n + r.shift;
      r.log_w[static_cast<std::size_t>(n)] = std::log(w);
      r.inv_sqrt_w[static_cast<std::size_t>(n)] = 1.0 / std::sqrt(w);
    }
    residues_.push_back(std::move(r));
  }
}

std::complex<double> HardyZEvaluator::l_critical(double t) const {
  if (!(std::fabs(t) <= height_))
    throw Error(Errc::precision_unreachable,
                "t=" + std::to_string(t) + " beyond evaluator height " + std::to_string(height_));
  const std::complex<double> s(0.5, t);
  std::complex<double> acc;
  for (const auto& r : residues_) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < r.log_w.size(); ++n) {
      const double phase = t * r.log_w[n];
      re += r.inv_sqrt_w[n] * std::cos(phase);
      im -= r.inv_sqrt_w[n] * std::sin(phase);
    }
    const std::complex<double> tail =
        em_tail<double>(s, prec_.direct_terms + r.shift, prec_.bernoulli_terms, true);
    acc += r.chi * (std::complex<double>(re, im) + tail);
  }
  if (params_.character.is_principal()) acc += 1.0 / (s - 1.0);
  return std::polar(1.0 / std::sqrt(std::exp(log_q_)), -t * log_q_) * acc;
}

double HardyZEvaluator::operator()(double t) const {
  const std::complex<double> z =
      params_.rotation * std::polar(1.0, hardy_theta(params_, t)) * l_critical(t);
  if (realness_ok(z)) return z.real();
  return hardy_z(params_.character, t, prec_);
}

}  // namespace dpc
