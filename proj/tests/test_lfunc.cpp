#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dpc/error.hpp"
#include "dpc/lfunc.hpp"

using namespace dpc;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference values from tests/oracle/gen_oracles.py (mpmath, 40 digits).
constexpr double kZeta3 = 1.2020569031595942854;
constexpr double kZetaHalf = -1.4603545088095868129;
constexpr double kLMinus3At2 = 0.78130241289648629687;
constexpr double kAbsLMinus4Half10i = 0.44393003613972977822;
constexpr double kSiegelZ20 = 1.1478424121851972776;
constexpr double kFirstZetaZero = 14.134725141734694;

DirichletCharacter real_char(std::uint64_t q) {
  for (const auto& chi : enumerate_characters(q))
    if (chi.is_primitive() && chi.is_real() && !chi.is_principal()) return chi;
  throw std::logic_error("no real primitive character");
}

// Completed-function gamma factor G(s) = (q/pi)^{(s+a)/2} Gamma((s+a)/2), in logs.
cd log_gamma_factor(const DirichletCharacter& chi, cd s) {
  const cd z = (s + static_cast<double>(chi.parity())) / 2.0;
  return z * std::log(static_cast<double>(chi.modulus()) / kPi) + log_gamma(z);
}

}  // namespace

TEST_CASE("hurwitz_zeta classical values") {
  const auto prec = EvalPrecision::for_height(10.0, 1e-13);
  CHECK(std::abs(hurwitz_zeta(2.0, 1.0, prec) - kPi * kPi / 6.0) < 1e-12);
  CHECK(std::abs(hurwitz_zeta(3.0, 1.0, prec) - kZeta3) < 1e-12);
  CHECK(std::abs(hurwitz_zeta(2.0, 0.5, prec) - kPi * kPi / 2.0) < 1e-12);
  CHECK(std::abs(hurwitz_zeta(0.5, 1.0, prec) - kZetaHalf) < 1e-12);
}

TEST_CASE("hurwitz_zeta(2, 1/2) against direct summation") {
  // sum_{n < N} (n + 1/2)^{-2} plus the integral tail 1/N, with error O(N^-3)
  double direct = 0.0;
  const int n_terms = 200000;
  for (int n = n_terms - 1; n >= 0; --n) direct += 1.0 / ((n + 0.5) * (n + 0.5));
  direct += 1.0 / n_terms;
  const auto prec = EvalPrecision::for_height(0.0, 1e-13);
  CHECK(std::abs(hurwitz_zeta(2.0, 0.5, prec) - direct) < 1e-12);
}

TEST_CASE("hurwitz_zeta errors") {
  const auto prec = EvalPrecision::for_height(10.0);
  CHECK_THROWS_WITH_AS(hurwitz_zeta(1.0, 0.5, prec), doctest::Contains("pole"), Error);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0, prec), Error);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 1.5, prec), Error);
  EvalPrecision weak;
  weak.direct_terms = 2;
  weak.bernoulli_terms = 2;
  weak.target_abs_error = 1e-14;
  try {
    (void)hurwitz_zeta(cd(0.5, 200.0), 0.5, weak);
    FAIL("expected precision error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precision_unreachable);
  }
}

TEST_CASE("hurwitz_zeta is stable under doubled direct terms") {
  const auto prec = EvalPrecision::for_height(100.0, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tdist(-100.0, 100.0), adist(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    const cd s(0.5, tdist(rng));
    const double a = adist(rng);
    CHECK(std::abs(hurwitz_zeta(s, a, prec) - hurwitz_zeta(s, a, prec.doubled())) < 1e-12);
  }
}

TEST_CASE("l_value examples") {
  const auto prec = EvalPrecision::for_height(10.0, 1e-13);
  CHECK(std::abs(l_value(DirichletCharacter::principal(1), 2.0, prec) - kPi * kPi / 6.0) < 1e-12);

  const auto chi4 = real_char(4);
  CHECK(std::abs(l_value(chi4, 1.0, prec) - kPi / 4.0) < 1e-10);

  // Leibniz partial sums averaged over two consecutive cut-offs
  double leibniz = 0.0, prev = 0.0;
  for (int k = 0; k < 100000; ++k) {
    prev = leibniz;
    leibniz += (k % 2 == 0 ? 1.0 : -1.0) / (2 * k + 1);
  }
  CHECK(std::abs(l_value(chi4, 1.0, prec).real() - 0.5 * (leibniz + prev)) < 1e-9);

  const auto chi3 = real_char(3);
  double series = 0.0;
  const int cut = 300000;
  for (int n = 1; n <= cut; ++n) series += chi3.value(n).real() / (double(n) * n);
  // tail of an alternating-pattern series bounded by 1/cut^2
  CHECK(std::abs(l_value(chi3, 2.0, prec) - series) < 2.0 / (double(cut) * cut) + 1e-12);
  CHECK(std::abs(l_value(chi3, 2.0, prec) - kLMinus3At2) < 1e-12);

  CHECK_THROWS_AS(l_value(DirichletCharacter::principal(6), 1.0, prec), Error);
}

TEST_CASE("imprimitive L-values: inducer route equals direct Hurwitz route") {
  const auto prec = EvalPrecision::for_height(40.0, 1e-12);
  for (std::uint64_t q = 2; q <= 24; ++q)
    for (const auto& chi : enumerate_characters(q))
      for (const cd s : {cd(0.5, 7.3), cd(2.0, 0.0), cd(0.8, -31.0)}) {
        CAPTURE(chi.label().to_string());
        const cd a = l_value(chi, s, prec);
        const cd b = l_value_hurwitz(chi, s, prec);
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
      }
}

TEST_CASE("conjugation symmetry at random points") {
  const auto prec = EvalPrecision::for_height(60.0, 1e-12);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tdist(-60.0, 60.0), sdist(0.3, 1.5);
  std::vector<DirichletCharacter> pool;
  for (std::uint64_t q : {1, 3, 5, 7, 8, 13}) {
    auto chars = enumerate_characters(q);
    pool.insert(pool.end(), chars.begin(), chars.end());
  }
  for (int i = 0; i < 1000; ++i) {
    const auto& chi = pool[static_cast<std::size_t>(i) % pool.size()];
    const cd s(sdist(rng), tdist(rng));
    const cd lhs = l_value(chi.conj(), std::conj(s), prec);
    const cd rhs = std::conj(l_value(chi, s, prec));
    CHECK(std::abs(lhs - rhs) < 2e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("root numbers") {
  CHECK(std::abs(root_number(DirichletCharacter::principal(1)) - 1.0) < 1e-14);
  CHECK(std::abs(root_number(real_char(4)) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(root_number(real_char(3))) - 1.0) < 1e-12);
  CHECK_THROWS_AS(root_number(DirichletCharacter::principal(4)), Error);
  for (std::uint64_t q = 1; q <= 50; ++q)
    for (const auto& chi : enumerate_characters(q))
      if (chi.is_primitive()) {
        CHECK(std::abs(std::abs(root_number(chi)) - 1.0) < 1e-10);
        // real primitive characters have root number 1
        if (chi.is_real()) CHECK(std::abs(root_number(chi) - 1.0) < 1e-10);
      }
}

TEST_CASE("functional equation residual") {
  const auto prec = EvalPrecision::for_height(61.0, 1e-12);
  for (std::uint64_t q = 1; q <= 24; ++q)
    for (const auto& chi : enumerate_characters(q)) {
      if (!chi.is_primitive()) continue;
      const cd eps = root_number(chi);
      const auto bar = chi.conj();
      for (double t : {-60.0, -23.5, -3.1, 0.4, 9.9, 37.0, 60.0})
        for (double sigma : {0.5, 0.75}) {
          const cd s(sigma, t);
          const cd ls = l_value(chi, s, prec);
          const cd reflected = l_value(bar, 1.0 - s, prec);
          const cd ratio = std::exp(log_gamma_factor(chi, 1.0 - s) - log_gamma_factor(chi, s));
          CAPTURE(chi.label().to_string());
          CAPTURE(t);
          CHECK(std::abs(ls - eps * ratio * reflected) < 1e-8 * (1.0 + std::abs(ls)));
        }
    }
}

TEST_CASE("log_gamma") {
  CHECK(std::abs(log_gamma(cd(1.0, 0.0))) < 1e-14);
  CHECK(std::abs(log_gamma(cd(0.5, 0.0)) - 0.5 * std::log(kPi)) < 1e-14);
  CHECK(std::abs(log_gamma(cd(0.25, 50.0)) -
                 cd(-78.5988804327018425039796895974, 145.208659524257228332654496681)) < 1e-11);
  CHECK(std::abs(log_gamma(cd(0.75, -30.0)) -
                 cd(-45.3546606072901356495771028481, -72.4289677594123881263892028946)) < 1e-11);
  // recurrence on the continuous branch
  for (double y : {-80.0, -5.0, 0.3, 12.0, 99.0}) {
    const cd z(0.25, y);
    CHECK(std::abs(log_gamma(z + 1.0) - log_gamma(z) - std::log(z)) < 1e-11);
  }
}

TEST_CASE("hardy_z") {
  const auto prec = EvalPrecision::for_height(30.0, 1e-13);
  const auto trivial = DirichletCharacter::principal(1);
  CHECK(std::fabs(hardy_z(trivial, kFirstZetaZero, prec)) < 1e-6);
  const double z0 = hardy_z(trivial, 0.0, prec);
  CHECK(z0 < 0.0);
  CHECK(std::fabs(z0 - kZetaHalf) < 1e-12);
  CHECK(std::fabs(hardy_z(trivial, 20.0, prec) - kSiegelZ20) < 1e-11);

  const auto chi4 = real_char(4);
  const CompletedLParams params(chi4);
  const cd rotated = params.rotation * std::polar(1.0, hardy_theta(params, 10.0)) *
                     l_value(chi4, cd(0.5, 10.0), prec);
  CHECK(std::fabs(rotated.imag()) < 1e-8);
  CHECK(std::fabs(std::fabs(hardy_z(chi4, 10.0, prec)) - kAbsLMinus4Half10i) < 1e-12);

  CHECK_THROWS_AS(hardy_z(DirichletCharacter::principal(4), 5.0, prec), Error);
}

TEST_CASE("hardy_z is real for every primitive character") {
  const auto prec = EvalPrecision::for_height(100.0, 1e-12);
  for (std::uint64_t q = 1; q <= 24; ++q)
    for (const auto& chi : enumerate_characters(q)) {
      if (!chi.is_primitive()) continue;
      const CompletedLParams params(chi);
      for (double t = -100.0; t <= 100.0; t += 13.7) {
        const cd z = params.rotation * std::polar(1.0, hardy_theta(params, t)) *
                     l_value(chi, cd(0.5, t), prec);
        CHECK(std::fabs(z.imag()) < 1e-8 * (1.0 + std::fabs(z.real())));
      }
    }
}

TEST_CASE("HardyZEvaluator agrees with hardy_z") {
  for (std::uint64_t q : {1, 3, 5, 8, 11, 24}) {
    for (const auto& chi : enumerate_characters(q)) {
      if (!chi.is_primitive()) continue;
      const HardyZEvaluator eval(chi, 100.0);
      for (double t = -99.0; t <= 100.0; t += 7.3)
        CHECK(std::fabs(eval(t) - hardy_z(chi, t, eval.precision())) < 1e-10);
      CHECK_THROWS_AS(eval(100.5), Error);
    }
  }
}

TEST_CASE("precision budget line") {
  const auto prec = EvalPrecision::for_height(50.0);
  const std::string line = prec.describe(cd(0.5, 50.0));
  CHECK(line.find("lfunc.budget") == 0);
  CHECK(line.find("N=") != std::string::npos);
  CHECK(em_remainder_bound(cd(0.5, 50.0), 0.0, prec.direct_terms, prec.bernoulli_terms) <=
        prec.target_abs_error);
  CHECK(tau_height(-3.0) == 5.0);
}
