#include "dpc/explicit.hpp"

#include <cmath>

#include "dpc/error.hpp"
#include "dpc/sieve.hpp"

namespace dpc {

namespace {

void check_range(double x, double Z) {
  require(std::isfinite(x) && std::isfinite(Z), "x and Z must be finite");
  require(Z >= 2 && Z <= x, "need 2 <= Z <= x");
}

void check_set(const ZeroSet& set, double Z) {
  require(set.completeness.certified, "zero set for " + set.character.to_string() + " is not certified",
          Errc::not_certified);
  require(set.height >= Z, "zero set for " + set.character.to_string() + " does not reach Z");
}

double budget_for(double x, double Z, double log_arg) {
  const double l = std::log(log_arg);
  return x * l * l / Z;
}

void finish(ExplicitFormulaRun& run) {
  run.abs_error = std::abs(run.reconstructed - run.exact);
  run.measured_constant = run.abs_error / run.budget;
}

std::uint64_t count_used(const ZeroSet& set, double Z) {
  std::uint64_t n = 0;
  for (const auto& r : set.records) n += std::abs(r.ordinate) <= Z;
  return n;
}

}  // namespace

std::complex<double> zero_sum(double x, double Z, const ZeroSet& set) {
  require(x > 0, "x must be positive");
  require(set.height >= Z, "zero set does not reach Z");
  const long double lx = std::log(static_cast<long double>(x));
  const long double root = std::sqrt(static_cast<long double>(x));
  std::complex<long double> acc{};
  for (const auto& r : set.records) {
    if (std::abs(r.ordinate) > Z) continue;
    const std::complex<long double> rho(0.5L, r.ordinate);
    acc += std::polar(root, r.ordinate * lx) / rho;
  }
  return std::complex<double>(acc);
}

ExplicitFormulaRun psi_from_zeros(double x, double Z, const ZeroSet& zeta) {
  check_range(x, Z);
  check_set(zeta, Z);
  require(zeta.conductor == 1, "psi(x) needs the zeta zero set");
  ExplicitFormulaRun run;
  run.x = x;
  run.Z = Z;
  const auto s = zero_sum(x, Z, zeta);
  run.imag_residue = s.imag();
  run.reconstructed = x - s.real();
  run.exact = psi(x);
  run.budget = budget_for(x, Z, x * Z);
  run.zeros_used = count_used(zeta, Z);
  finish(run);
  return run;
}

ExplicitFormulaRun psi_chi_from_zeros(double x, double Z, const DirichletCharacter& chi, const ZeroSet& set) {
  check_range(x, Z);
  check_set(set, Z);
  require(!chi.is_principal(), "the principal character has a main term; use psi_from_zeros");
  require(set.character == conductor_and_inducer(chi).second.label(),
          "zero set " + set.character.to_string() + " does not belong to " + chi.label().to_string());
  ExplicitFormulaRun run;
  run.x = x;
  run.Z = Z;
  run.q = chi.modulus();
  run.character = chi.label();
  const auto s = zero_sum(x, Z, set);
  if (chi.is_real()) {
    run.imag_residue = s.imag();
    run.reconstructed = -s.real();
  } else {
    run.reconstructed = -s;
  }
  run.exact = psi_character(x, chi);
  run.budget = budget_for(x, Z, static_cast<double>(run.q) * x);
  run.zeros_used = count_used(set, Z);
  finish(run);
  return run;
}

ExplicitFormulaRun psi_progression_from_zeros(double x, double Z, std::uint64_t q, std::int64_t a,
                                              const ZeroSetMap& sets) {
  check_range(x, Z);
  unit_residue(a, q);
  ExplicitFormulaRun run;
  run.x = x;
  run.Z = Z;
  run.q = q;
  run.a = a;
  run.character = {q, 0};
  std::complex<long double> acc{};
  for (const auto& chi : enumerate_characters(q)) {
    const ZeroSet& set = certified_set(sets, chi.label(), Z);
    acc += std::complex<long double>(std::conj(chi.value(a))) * std::complex<long double>(zero_sum(x, Z, set));
    run.zeros_used += count_used(set, Z);
  }
  const double phi = static_cast<double>(euler_phi(q));
  run.imag_residue = static_cast<double>(acc.imag()) / phi;
  run.reconstructed = static_cast<double>((x - acc.real()) / phi);
  run.exact = psi_progression(x, q, a);
  run.budget = budget_for(x, Z, static_cast<double>(q) * x);
  finish(run);
  return run;
}

ExplicitFormulaRun psi_progression_by_characters(double x, double Z, std::uint64_t q, std::int64_t a,
                                                 const ZeroSetMap& sets) {
  check_range(x, Z);
  unit_residue(a, q);
  ExplicitFormulaRun run;
  run.x = x;
  run.Z = Z;
  run.q = q;
  run.a = a;
  run.character = {q, 0};
  std::complex<long double> rebuilt{}, exact{};
  for (const auto& chi : enumerate_characters(q)) {
    const ZeroSet& set = certified_set(sets, chi.label(), Z);
    const std::complex<long double> c(std::conj(chi.value(a)));
    std::complex<double> part;
    if (chi.is_principal())
      part = x - zero_sum(x, Z, set);
    else
      part = psi_chi_from_zeros(x, Z, chi, set).reconstructed;
    rebuilt += c * std::complex<long double>(part);
    exact += c * std::complex<long double>(psi_character(x, chi));
    run.zeros_used += count_used(set, Z);
  }
  const long double phi = euler_phi(q);
  run.imag_residue = static_cast<double>(rebuilt.imag() / phi);
  run.reconstructed = static_cast<double>(rebuilt.real() / phi);
  run.exact = std::complex<double>(exact / phi);
  run.budget = budget_for(x, Z, static_cast<double>(q) * x);
  finish(run);
  return run;
}

}  // namespace dpc
