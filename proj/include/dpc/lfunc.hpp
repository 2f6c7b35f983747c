#pragma once

// Dirichlet L-functions near the critical line.
//
// L(s, chi) = q^{-s} sum_{a mod q} chi(a) zeta(s, a/q), with the Hurwitz zeta
// function evaluated by Euler-Maclaurin summation: N direct terms followed by
// M Bernoulli corrections, and the classical remainder bound checked against
// the requested absolute error at every call.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dpc/characters.hpp"

namespace dpc {

struct EvalPrecision {
  double target_abs_error = 1e-12;
  int direct_terms = 32;
  int bernoulli_terms = 12;

  /// Smallest N (starting from the rule N >= (|t| + 10) / 2) whose remainder
  /// bound meets `target` for every s with Re s >= 1/2 and |Im s| <= height.
  static EvalPrecision for_height(double height, double target = 1e-12, int bernoulli_terms = 12);
  /// Same parameters with twice as many direct terms.
  EvalPrecision doubled() const;
  /// One structured log line describing the budget at s.
  std::string describe(std::complex<double> s) const;
};

/// Remainder bound of the Euler-Maclaurin tail of zeta(s, a) at (N, M).
double em_remainder_bound(std::complex<double> s, double a, int direct_terms, int bernoulli_terms);

/// zeta(s, a) for 0 < a <= 1, s != 1.
std::complex<double> hurwitz_zeta(std::complex<double> s, double a, const EvalPrecision& prec);

/// L(s, chi). Imprimitive characters go through the inducing primitive
/// character and the Euler factors at the primes dividing q.
std::complex<double> l_value(const DirichletCharacter& chi, std::complex<double> s,
                             const EvalPrecision& prec);
/// L(s, chi) straight from q^{-s} sum chi(a) zeta(s, a/q), for any chi.
std::complex<double> l_value_hurwitz(const DirichletCharacter& chi, std::complex<double> s,
                                     const EvalPrecision& prec);

/// tau(chi) / (i^a sqrt(q)) for primitive chi.
std::complex<double> root_number(const DirichletCharacter& chi);

/// Current rotation-branch convention: principal square root of the root
/// number, log-gamma continued from t = 0. Persisted with cached zeros.
inline constexpr std::uint32_t kRotationBranchTag = 1;

struct CompletedLParams {
  DirichletCharacter character;
  int parity = 0;
  std::complex<double> root_number;
  /// conj(sqrt(root_number)) on the principal branch.
  std::complex<double> rotation;
  std::uint32_t branch_tag = kRotationBranchTag;

  explicit CompletedLParams(const DirichletCharacter& chi);
};

/// log Gamma(z) on the branch continuous from the positive real axis, Re z > 0.
std::complex<double> log_gamma(std::complex<double> z);
std::complex<long double> log_gamma(std::complex<long double> z);

/// Phase theta(t) with exp(i theta) L(1/2+it) pointing along the real
/// completed function: (t/2) log(q/pi) + Im log Gamma((1/2 + a + it)/2).
double hardy_theta(const CompletedLParams& params, double t);

/// Real rotated value Z(t) = rotation * exp(i theta(t)) * L(1/2+it, chi).
/// Retries in extended precision if the discarded imaginary part exceeds
/// 1e-8 (1 + |Z|); throws realness_violation if that also fails.
double hardy_z(const DirichletCharacter& chi, double t, const EvalPrecision& prec);

/// Fast Z evaluator for scanning one primitive character up to a fixed height.
class HardyZEvaluator {
 public:
  HardyZEvaluator(const DirichletCharacter& chi, double height, double target_abs_error = 1e-12);

  double operator()(double t) const;
  /// L(1/2+it) from the precomputed tables.
  std::complex<double> l_critical(double t) const;
  const CompletedLParams& params() const noexcept { return params_; }
  const EvalPrecision& precision() const noexcept { return prec_; }
  double height() const noexcept { return height_; }

 private:
  CompletedLParams params_;
  EvalPrecision prec_;
  double height_;
  double log_q_;
  struct Residue {
    std::complex<double> chi;
    double shift;  // a/q
    std::vector<double> log_w;
    std::vector<double> inv_sqrt_w;
  };
  std::vector<Residue> residues_;
};

/// The |t| + 2 height used in bound reports.
inline double tau_height(double t) { return (t < 0 ? -t : t) + 2.0; }

}  // namespace dpc
