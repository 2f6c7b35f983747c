#include "dpc/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpc/error.hpp"
#include "dpc/numeric.hpp"

namespace dpc {

namespace {

constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;

std::uint64_t floor_arg(double x) {
  require(std::isfinite(x), "sieve argument must be finite");
  if (x < 0) return 0;
  require(x <= static_cast<double>(kMaxSieveArgument), "sieve argument exceeds 2^40");
  return static_cast<std::uint64_t>(std::floor(x));
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

}  // namespace

double PrimePower::log_p() const { return std::log(static_cast<double>(p)); }
long double PrimePower::log_p_ld() const { return std::log(static_cast<long double>(p)); }

void for_each_prime_power(std::uint64_t lo, std::uint64_t hi,
                          const std::function<void(std::span<const PrimePower>)>& batch) {
  lo = std::max<std::uint64_t>(lo, 2);
  if (hi < lo) return;
  require(hi <= kMaxSieveArgument, "sieve range exceeds 2^40");
  const auto base = small_primes(isqrt(hi));
  std::vector<char> composite(kSegment);
  std::vector<PrimePower> found;
  for (std::uint64_t seg_lo = lo; seg_lo <= hi; seg_lo += kSegment) {
    const std::uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    const std::size_t len = seg_hi - seg_lo + 1;
    std::fill(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(len), 0);
    found.clear();
    for (const std::uint64_t p : base) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= seg_hi; m += p) composite[m - seg_lo] = 1;
      // Higher powers of p inside this segment.
      std::uint64_t pk = p * p;
      int k = 2;
      while (pk <= seg_hi) {
        if (pk >= seg_lo) found.push_back({pk, p, k});
        if (pk > seg_hi / p) break;
        pk *= p;
        ++k;
      }
    }
    for (std::size_t i = 0; i < len; ++i)
      if (!composite[i]) found.push_back({seg_lo + i, seg_lo + i, 1});
    std::sort(found.begin(), found.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
    batch(found);
    if (seg_hi == hi) break;
  }
}

std::vector<PrimePower> prime_powers(std::uint64_t lo, std::uint64_t hi) {
  std::vector<PrimePower> out;
  for_each_prime_power(lo, hi, [&](std::span<const PrimePower> b) { out.insert(out.end(), b.begin(), b.end()); });
  return out;
}

LambdaTable::LambdaTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint32_t> prime,
                         std::vector<std::uint8_t> exponent)
    : lo_(lo), hi_(hi), prime_(std::move(prime)), exponent_(std::move(exponent)) {}

std::optional<PrimePower> LambdaTable::tag(std::uint64_t n) const {
  require(n >= lo_ && n <= hi_, "n = " + std::to_string(n) + " outside the table range");
  const std::size_t i = n - lo_;
  if (prime_[i] == 0) return std::nullopt;
  return PrimePower{n, prime_[i], exponent_[i]};
}

double LambdaTable::lambda(std::uint64_t n) const {
  const auto t = tag(n);
  return t ? t->log_p() : 0.0;
}

std::vector<PrimePower> LambdaTable::entries() const {
  std::vector<PrimePower> out;
  for (std::size_t i = 0; i < prime_.size(); ++i)
    if (prime_[i] != 0) out.push_back({lo_ + i, prime_[i], exponent_[i]});
  return out;
}

std::size_t LambdaTable::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(prime_.begin(), prime_.end(), [](std::uint32_t p) { return p != 0; }));
}

LambdaTable lambda_table(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_entries) {
  require(lo >= 2 && lo <= hi, "lambda_table needs 2 <= lo <= hi");
  require(hi <= 1'000'000'000, "lambda_table is limited to hi <= 1e9");
  require(hi - lo + 1 <= max_entries,
          "table of " + std::to_string(hi - lo + 1) + " entries exceeds the budget of " + std::to_string(max_entries));
  std::vector<std::uint32_t> prime(hi - lo + 1, 0);
  std::vector<std::uint8_t> exponent(hi - lo + 1, 0);
  for_each_prime_power(lo, hi, [&](std::span<const PrimePower> b) {
    for (const auto& e : b) {
      prime[e.n - lo] = static_cast<std::uint32_t>(e.p);
      exponent[e.n - lo] = static_cast<std::uint8_t>(e.k);
    }
  });
  return LambdaTable(lo, hi, std::move(prime), std::move(exponent));
}

std::uint64_t unit_residue(std::int64_t a, std::uint64_t q) {
  require(q >= 1, "modulus must be at least 1");
  const auto qi = static_cast<std::int64_t>(q);
  const auto r = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  require(std::gcd(r, q) == 1,
          "residue " + std::to_string(a) + " is not a unit mod " + std::to_string(q));
  return r;
}

std::vector<long double> psi_by_residue(double x, std::uint64_t q) {
  require(q >= 1, "modulus must be at least 1");
  const std::uint64_t n_max = floor_arg(x);
  std::vector<CompensatedSum<long double>> acc(q);
  for_each_prime_power(2, n_max, [&](std::span<const PrimePower> b) {
    for (const auto& e : b) acc[e.n % q] += e.log_p_ld();
  });
  std::vector<long double> out(q);
  for (std::uint64_t r = 0; r < q; ++r) out[r] = acc[r].value();
  return out;
}

double psi(double x) {
  return static_cast<double>(psi_by_residue(x, 1)[0]);
}

double psi_progression(double x, std::uint64_t q, std::int64_t a) {
  const std::uint64_t r = unit_residue(a, q);
  const std::uint64_t n_max = floor_arg(x);
  CompensatedSum<long double> acc;
  for_each_prime_power(2, n_max, [&](std::span<const PrimePower> b) {
    for (const auto& e : b)
      if (e.n % q == r) acc += e.log_p_ld();
  });
  return static_cast<double>(acc.value());
}

std::uint64_t pi_progression(double x, std::uint64_t q, std::int64_t a) {
  const std::uint64_t r = unit_residue(a, q);
  std::uint64_t count = 0;
  for_each_prime_power(2, floor_arg(x), [&](std::span<const PrimePower> b) {
    for (const auto& e : b)
      if (e.k == 1 && e.n % q == r) ++count;
  });
  return count;
}

std::complex<double> psi_character(double x, const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  const auto by_residue = psi_by_residue(x, q);
  CompensatedSum<long double> re, im;
  for (std::uint64_t r = 0; r < q; ++r) {
    const auto v = chi(static_cast<std::int64_t>(r));
    if (!v || by_residue[r] == 0) continue;
    const auto c = v->value_as<long double>();
    re += c.real() * by_residue[r];
    im += c.imag() * by_residue[r];
  }
  return {static_cast<double>(re.value()), static_cast<double>(im.value())};
}

double ramified_psi(double x, std::uint64_t q) {
  require(q >= 1, "modulus must be at least 1");
  const std::uint64_t n_max = floor_arg(x);
  CompensatedSum<long double> acc;
  for (const auto& [p, e] : factorize(q)) {
    (void)e;
    for (std::uint64_t pk = p; pk <= n_max; pk *= p) {
      acc += std::log(static_cast<long double>(p));
      if (pk > n_max / p) break;
    }
  }
  return static_cast<double>(acc.value());
}

SOfX s_of_x(double x, std::uint64_t q, std::int64_t a, double cutoff) {
  require(std::isfinite(x) && x >= 2, "S(x) needs x >= 2");
  require(cutoff >= 8 * x, "S(x) tail cutoff must be at least 8x");
  const std::uint64_t r = unit_residue(a, q);
  const std::uint64_t n_head = floor_arg(x);
  const std::uint64_t n_tail = floor_arg(cutoff);
  const long double xl = x;
  CompensatedSum<long double> head, tail;
  for_each_prime_power(2, n_tail, [&](std::span<const PrimePower> b) {
    for (const auto& e : b) {
      if (e.n % q != r) continue;
      const long double l = e.log_p_ld();
      const long double n = static_cast<long double>(e.n);
      if (e.n <= n_head)
        head += n * l * l;
      else
        tail += l * l / (n * n * n);
    }
  });
  SOfX out;
  out.cutoff = cutoff;
  out.head = static_cast<double>(head.value() / (xl * xl));
  out.tail = static_cast<double>(tail.value() * xl * xl);
  out.value = out.head + out.tail;
  // Lambda(n)^2 <= Lambda(n) log n with psi(t) < 1.04 t, by partial
  // summation; the second form is the customary coarser budget.
  const double lc = std::log(cutoff);
  const double rigorous = 1.04 * x * x * (1.5 * lc + 0.75) / (cutoff * cutoff);
  const double customary = x * x * lc * lc / (2 * cutoff * cutoff);
  out.remainder = std::max(rigorous, customary);
  return out;
}

BrunTitchmarsh brun_titchmarsh_check(double x, double y, std::uint64_t q, std::int64_t a) {
  require(std::isfinite(x) && x >= 0, "Brun-Titchmarsh check needs x >= 0");
  require(std::isfinite(y) && y > static_cast<double>(q), "Brun-Titchmarsh bound needs y > q");
  const std::uint64_t r = unit_residue(a, q);
  BrunTitchmarsh out;
  for_each_prime_power(floor_arg(x) + 1, floor_arg(x + y), [&](std::span<const PrimePower> b) {
    for (const auto& e : b)
      if (e.k == 1 && e.n % q == r) ++out.count;
  });
  out.bound = 2 * y / (static_cast<double>(euler_phi(q)) * std::log(y / static_cast<double>(q)));
  out.margin = out.bound - static_cast<double>(out.count);
  out.holds = out.margin > 0;
  return out;
}

}  // namespace dpc
