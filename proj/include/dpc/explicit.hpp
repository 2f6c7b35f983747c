#pragma once

// Truncated explicit formulas: psi(x), psi(x, chi) and psi(x; q, a) rebuilt
// from critical-line zeros up to height Z and compared with sieve values.

#include <complex>
#include <cstdint>

#include "dpc/zeros.hpp"

namespace dpc {

struct ExplicitFormulaRun {
  double x = 0;
  double Z = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  CharacterLabel character{1, 1};
  std::complex<double> reconstructed;
  std::complex<double> exact;
  double abs_error = 0;
  /// x log^2(xZ) / Z for psi(x), x log^2(qx) / Z otherwise.
  double budget = 0;
  /// abs_error / budget.
  double measured_constant = 0;
  /// Imaginary part of the zero sum before conjugate pairing (real cases).
  double imag_residue = 0;
  std::uint64_t zeros_used = 0;
};

/// sum_{|gamma| <= Z} x^{1/2 + i gamma} / (1/2 + i gamma) over one set.
std::complex<double> zero_sum(double x, double Z, const ZeroSet& set);

/// x - sum over zeta zeros. Requires 2 <= Z <= x and a certified set of
/// height >= Z.
ExplicitFormulaRun psi_from_zeros(double x, double Z, const ZeroSet& zeta);

/// -sum over the zeros of L(s, chi); chi must be nonprincipal. `set` holds
/// the zeros of chi's inducer.
ExplicitFormulaRun psi_chi_from_zeros(double x, double Z, const DirichletCharacter& chi, const ZeroSet& set);

/// (x - sum_chi conj(chi(a)) sum_gamma ...) / phi(q), one formula over all
/// characters.
ExplicitFormulaRun psi_progression_from_zeros(double x, double Z, std::uint64_t q, std::int64_t a,
                                              const ZeroSetMap& sets);

/// The same quantity assembled from per-character runs:
/// (1/phi(q)) sum_chi conj(chi(a)) psi_chi, with x - sum for the principal one.
ExplicitFormulaRun psi_progression_by_characters(double x, double Z, std::uint64_t q, std::int64_t a,
                                                 const ZeroSetMap& sets);

}  // namespace dpc
