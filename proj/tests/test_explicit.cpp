#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dpc/error.hpp"
#include "dpc/explicit.hpp"
#include "dpc/sieve.hpp"

using namespace dpc;

namespace {

const ZeroSetMap& sets(std::uint64_t q) {
  static std::map<std::uint64_t, ZeroSetMap> cache;
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, zeros_for_modulus(q, 100)).first;
  return it->second;
}

const ZeroSet& zeta() { return *sets(1).at({1, 1}); }

DirichletCharacter find_character(std::uint64_t q, bool real) {
  for (const auto& chi : enumerate_characters(q))
    if (!chi.is_principal() && chi.is_real() == real) return chi;
  throw Error(Errc::invariant, "no such character");
}

}  // namespace

TEST_CASE("zero_sum against a direct loop") {
  std::complex<double> brute{};
  for (const auto& r : zeta().records)
    if (std::abs(r.ordinate) <= 50)
      brute += std::pow(std::complex<double>(777.5), std::complex<double>(0.5, r.ordinate)) /
               std::complex<double>(0.5, r.ordinate);
  CHECK(std::abs(zero_sum(777.5, 50, zeta()) - brute) < 1e-10 * std::abs(brute));
}

TEST_CASE("psi_from_zeros") {
  const auto below = psi_from_zeros(1000.5, 14, zeta());
  CHECK(below.reconstructed == std::complex<double>(1000.5));
  CHECK(below.zeros_used == 0);
  CHECK(below.abs_error == doctest::Approx(std::abs(1000.5 - psi(1000.5))));

  const auto r30 = psi_from_zeros(1000.5, 30, zeta());
  const auto r100 = psi_from_zeros(1000.5, 100, zeta());
  CHECK(r100.abs_error < r30.abs_error);
  CHECK(std::abs(r100.imag_residue) < 1e-10 * 1000.5);
  CHECK(r100.zeros_used == 58);
  CHECK(r100.measured_constant == doctest::Approx(r100.abs_error / r100.budget));
  CHECK(r100.budget == doctest::Approx(1000.5 * std::pow(std::log(100050.0), 2) / 100));

  // Error trend over the Z ladder: non-increasing in most steps.
  int good = 0, total = 0;
  for (double x : {500.5, 1000.5, 5000.5}) {
    double prev = psi_from_zeros(x, 30, zeta()).abs_error;
    for (double Z : {50.0, 100.0}) {
      const double e = psi_from_zeros(x, Z, zeta()).abs_error;
      good += e <= prev;
      ++total;
      prev = e;
    }
  }
  CHECK(good * 5 >= total * 4 - 1);  // at least 80% rounded to whole steps

  CHECK_THROWS_AS(psi_from_zeros(1000.5, 1, zeta()), Error);
  CHECK_THROWS_AS(psi_from_zeros(50.5, 60, zeta()), Error);
  CHECK_THROWS_AS(psi_from_zeros(1000.5, 200, zeta()), Error);
  ZeroSet weak = zeta();
  weak.completeness.certified = false;
  try {
    psi_from_zeros(1000.5, 50, weak);
    FAIL("uncertified zeros accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_certified);
  }
}

TEST_CASE("psi_chi_from_zeros") {
  const auto chi4 = find_character(4, true);
  const auto& s4 = *sets(4).at(chi4.label());
  const auto run = psi_chi_from_zeros(500.5, 100, chi4, s4);
  CHECK(run.measured_constant <= 1);
  CHECK(std::abs(run.imag_residue) < 1e-10 * 500.5);
  CHECK(run.reconstructed.imag() == 0);

  const auto empty = psi_chi_from_zeros(500.5, 5, chi4, s4);
  CHECK(empty.reconstructed == std::complex<double>(0));
  CHECK(empty.abs_error == doctest::Approx(std::abs(psi_character(500.5, chi4))));

  const auto chi5 = find_character(5, false);
  const auto c5 = psi_chi_from_zeros(1000.5, 60, chi5, *sets(5).at(chi5.label()));
  CHECK(std::abs(c5.reconstructed.imag()) > 1e-3);
  CHECK(std::abs(c5.exact.imag()) > 1e-3);

  CHECK_THROWS_AS(psi_chi_from_zeros(500.5, 50, DirichletCharacter::principal(4), zeta()), Error);
  CHECK_THROWS_AS(psi_chi_from_zeros(500.5, 50, chi4, zeta()), Error);
}

TEST_CASE("psi_progression_from_zeros") {
  const auto one = psi_progression_from_zeros(1000.5, 60, 1, 1, sets(1));
  const auto direct = psi_from_zeros(1000.5, 60, zeta());
  CHECK(one.reconstructed.real() == doctest::Approx(direct.reconstructed.real()).epsilon(1e-14));
  CHECK(one.exact == direct.exact);

  for (std::int64_t a : {1, 3}) {
    const auto lo = psi_progression_from_zeros(1000.5, 15, 4, a, sets(4));
    const auto hi = psi_progression_from_zeros(1000.5, 60, 4, a, sets(4));
    CAPTURE(a);
    CHECK(hi.abs_error < lo.abs_error);
  }

  // Two computation paths and the orthogonality reconstruction of the exact side.
  for (std::uint64_t q : {4, 5, 12}) {
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a) {
      if (std::gcd(static_cast<std::uint64_t>(a), q) != 1) continue;
      const auto formula = psi_progression_from_zeros(1000.5, 80, q, a, sets(q));
      const auto assembled = psi_progression_by_characters(1000.5, 80, q, a, sets(q));
      CHECK(std::abs(formula.reconstructed - assembled.reconstructed) < 1e-10 * 1000.5);
      CHECK(std::abs(assembled.exact - formula.exact) < 1e-8);
      CHECK(std::abs(formula.imag_residue) < 1e-10 * 1000.5);
    }
  }

  // Summing over units gives back the psi(x) reconstruction.
  for (std::uint64_t q : {5, 12}) {
    double total = 0;
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a)
      if (std::gcd(static_cast<std::uint64_t>(a), q) == 1)
        total += psi_progression_from_zeros(2000.5, 90, q, a, sets(q)).reconstructed.real();
    CHECK(std::abs(total - psi_from_zeros(2000.5, 90, zeta()).reconstructed.real()) < 1e-8 * 2000.5);
  }

  // Empty window: main term only.
  const auto bare = psi_progression_from_zeros(1000.5, 2, 4, 1, sets(4));
  CHECK(bare.reconstructed == std::complex<double>(1000.5 / 2));
  CHECK_THROWS_AS(psi_progression_from_zeros(1000.5, 60, 4, 2, sets(4)), Error);
}
