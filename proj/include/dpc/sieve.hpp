#pragma once

// Prime-side arithmetic: von Mangoldt tables from a segmented sieve, psi and
// pi in progressions, character twists, S(x), and the Brun-Titchmarsh bound.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dpc/characters.hpp"

namespace dpc {

/// n = p^k, carried exactly; log p is rendered on demand.
struct PrimePower {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  int k = 0;
  double log_p() const;
  long double log_p_ld() const;
};

/// Entries of a table (hi - lo + 1) allowed by default: 2^26.
inline constexpr std::uint64_t kDefaultSieveBudget = std::uint64_t{1} << 26;
/// Largest argument the streaming sieve accepts.
inline constexpr std::uint64_t kMaxSieveArgument = std::uint64_t{1} << 40;

class LambdaTable {
 public:
  LambdaTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint32_t> prime, std::vector<std::uint8_t> exponent);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  /// The (p, k) tag of n, or nothing when Lambda(n) = 0.
  std::optional<PrimePower> tag(std::uint64_t n) const;
  double lambda(std::uint64_t n) const;
  /// Nonzero entries in increasing order.
  std::vector<PrimePower> entries() const;
  std::size_t nonzero_count() const;

 private:
  std::uint64_t lo_, hi_;
  std::vector<std::uint32_t> prime_;
  std::vector<std::uint8_t> exponent_;
};

/// Lambda on [lo, hi], 2 <= lo <= hi <= 1e9, refusing tables larger than
/// `max_entries`.
LambdaTable lambda_table(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_entries = kDefaultSieveBudget);

/// All prime powers in [lo, hi] (lo may be below 2), one batch per sieve
/// segment, batches in increasing order.
void for_each_prime_power(std::uint64_t lo, std::uint64_t hi,
                          const std::function<void(std::span<const PrimePower>)>& batch);
std::vector<PrimePower> prime_powers(std::uint64_t lo, std::uint64_t hi);

/// psi(x; q, r) for every residue r mod q, unit or not.
std::vector<long double> psi_by_residue(double x, std::uint64_t q);

double psi(double x);
/// psi(x; q, a); gcd(a, q) must be 1.
double psi_progression(double x, std::uint64_t q, std::int64_t a);
/// pi(x; q, a); gcd(a, q) must be 1.
std::uint64_t pi_progression(double x, std::uint64_t q, std::int64_t a);
/// psi(x, chi) = sum_{n <= x} Lambda(n) chi(n).
std::complex<double> psi_character(double x, const DirichletCharacter& chi);
/// sum_{p | q, p^k <= x} log p: the prime powers no unit class sees.
double ramified_psi(double x, std::uint64_t q);

struct SOfX {
  double value = 0;      // head + tail
  double head = 0;       // x^-2 sum_{n <= x} n Lambda(n)^2
  double tail = 0;       // x^2 sum_{x < n <= cutoff} Lambda(n)^2 / n^3
  double remainder = 0;  // bound on the omitted n > cutoff
  double cutoff = 0;
};

/// S(x) over n = a mod q with the infinite tail cut at `cutoff` >= 8x.
SOfX s_of_x(double x, std::uint64_t q, std::int64_t a, double cutoff);

struct BrunTitchmarsh {
  bool holds = false;
  double margin = 0;  // bound - count
  double bound = 0;   // 2y / (phi(q) log(y/q))
  std::uint64_t count = 0;
};

/// Primes p = a mod q in (x, x + y] against 2y / (phi(q) log(y/q)); y > q.
BrunTitchmarsh brun_titchmarsh_check(double x, double y, std::uint64_t q, std::int64_t a);

/// Reduces a into [0, q) and checks gcd(a, q) = 1.
std::uint64_t unit_residue(std::int64_t a, std::uint64_t q);

}  // namespace dpc
