#pragma once

// Finite-x measurements of progression errors psi(x; q, a) - x / phi(q):
// Montgomery-normalized tables, the Elliott-Halberstam sum, a phi(q)^alpha
// normalized sweep, and the dyadic block profile.

#include <cstdint>
#include <optional>
#include <vector>

#include "dpc/sieve.hpp"

namespace dpc {

/// Prime powers up to x, sieved once and shared across moduli.
class PrimePowerSums {
 public:
  explicit PrimePowerSums(double x);
  double x() const noexcept { return x_; }
  /// psi(x; q, r) for every residue r, summed in increasing n.
  std::vector<long double> by_residue(std::uint64_t q) const;

 private:
  double x_;
  std::vector<PrimePower> powers_;
};

struct MontgomeryRow {
  double x = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double psi = 0;
  double main_term = 0;         // x / phi(q)
  double error = 0;             // psi - main_term
  double scale = 0;             // sqrt(x / q)
  double normalized = 0;        // error / scale
  double implied_epsilon = 0;   // log|normalized| / log x when |normalized| > 1, else 0
  double grh_scale = 0;         // sqrt(x) log^2 x / phi(q)
  double grh_ratio = 0;         // |error| / grh_scale
};

/// Rows for every unit a mod q (or only `a`), for every x and q, ordered by
/// x, then q, then a.
std::vector<MontgomeryRow> montgomery_table(const std::vector<double>& xs, const std::vector<std::uint64_t>& qs,
                                            std::optional<std::int64_t> a = std::nullopt, unsigned threads = 1);

struct EhTerm {
  std::uint64_t q = 1;
  std::int64_t argmax = 1;
  double max_error = 0;
};
struct EhSum {
  double x = 0;
  std::uint64_t Q = 1;
  double value = 0;
  double ratio = 0;  // value / x
  std::vector<EhTerm> terms;
};
/// sum_{q <= Q} max_{(a,q)=1} |psi(x; q, a) - x / phi(q)|. Requires 1 <= Q < x.
EhSum eh_sum(double x, std::uint64_t Q, unsigned threads = 1);

struct WeakFormRow {
  double x = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double alpha = 0;
  double error = 0;
  double normalizer = 0;  // sqrt(x phi(q)^alpha / q)
  double normalized = 0;
};
/// Requires 0 <= alpha <= 1.
std::vector<WeakFormRow> weak_form_table(double x, const std::vector<std::uint64_t>& qs, double alpha,
                                         std::optional<std::int64_t> a = std::nullopt, unsigned threads = 1);

struct DyadicBlock {
  int j = 0;
  double upper = 0;       // x / 2^j
  double error = 0;       // psi(x/2^j) - psi(x/2^{j+1}) - x / (2^{j+1} phi(q))
  double normalized = 0;  // error / sqrt(x / (2^j q))
};
struct DyadicProfile {
  double x = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double eps = 0.1;
  int J = 0;
  std::vector<DyadicBlock> blocks;  // j = 0 .. J-1
  double tail_error = 0;            // psi(x/2^J) - x / (2^J phi(q))
  double total_error = 0;           // psi(x) - x / phi(q), computed directly
  double telescoping_residual = 0;  // |sum blocks + tail - total|
};
/// Largest J >= 0 with (x / 2^J)^{1 - eps} >= q.
int dyadic_depth(double x, std::uint64_t q, double eps);
/// Requires 0 < eps < 1 and q <= x^{1 - eps}.
DyadicProfile dyadic_profile(double x, std::uint64_t q, std::int64_t a, double eps = 0.1);

}  // namespace dpc
