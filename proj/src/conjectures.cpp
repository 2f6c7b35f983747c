#include "dpc/conjectures.hpp"

#include <cmath>
#include <numeric>

#include "dpc/error.hpp"
#include "dpc/numeric.hpp"
#include "dpc/parallel.hpp"

namespace dpc {

namespace {

std::vector<std::int64_t> units_of(std::uint64_t q, std::optional<std::int64_t> a) {
  if (a) {
    const auto r = unit_residue(*a, q);
    return {q == 1 ? 1 : static_cast<std::int64_t>(r)};
  }
  std::vector<std::int64_t> out;
  for (std::uint64_t r = 0; r < q; ++r)
    if (std::gcd(r, q) == 1) out.push_back(static_cast<std::int64_t>(r));
  if (q == 1) out = {1};
  return out;
}

std::size_t residue_index(std::int64_t a, std::uint64_t q) { return q == 1 ? 0 : static_cast<std::size_t>(a); }

void require_x(double x) { require(std::isfinite(x) && x >= 2, "x must be at least 2"); }

}  // namespace

PrimePowerSums::PrimePowerSums(double x) : x_(x) {
  require_x(x);
  powers_ = prime_powers(2, static_cast<std::uint64_t>(std::floor(x)));
}

std::vector<long double> PrimePowerSums::by_residue(std::uint64_t q) const {
  require(q >= 1, "modulus must be at least 1");
  std::vector<CompensatedSum<long double>> acc(q);
  for (const auto& e : powers_) acc[e.n % q] += e.log_p_ld();
  std::vector<long double> out(q);
  for (std::uint64_t r = 0; r < q; ++r) out[r] = acc[r].value();
  return out;
}

std::vector<MontgomeryRow> montgomery_table(const std::vector<double>& xs, const std::vector<std::uint64_t>& qs,
                                            std::optional<std::int64_t> a, unsigned threads) {
  std::vector<MontgomeryRow> rows;
  for (double x : xs) {
    const PrimePowerSums sums(x);
    std::vector<std::vector<MontgomeryRow>> per_q(qs.size());
    parallel_for(qs.size(), threads, [&](std::size_t i) {
      const std::uint64_t q = qs[i];
      const auto residues = sums.by_residue(q);
      const double phi = static_cast<double>(euler_phi(q));
      const double lx = std::log(x);
      for (std::int64_t r : units_of(q, a)) {
        MontgomeryRow row;
        row.x = x;
        row.q = q;
        row.a = r;
        row.psi = static_cast<double>(residues[residue_index(r, q)]);
        row.main_term = x / phi;
        row.error = row.psi - row.main_term;
        row.scale = std::sqrt(x / static_cast<double>(q));
        row.normalized = row.error / row.scale;
        row.implied_epsilon = std::abs(row.normalized) > 1 ? std::log(std::abs(row.normalized)) / lx : 0;
        row.grh_scale = std::sqrt(x) * lx * lx / phi;
        row.grh_ratio = std::abs(row.error) / row.grh_scale;
        per_q[i].push_back(row);
      }
    });
    for (auto& v : per_q) rows.insert(rows.end(), v.begin(), v.end());
  }
  return rows;
}

EhSum eh_sum(double x, std::uint64_t Q, unsigned threads) {
  require_x(x);
  require(Q >= 1 && static_cast<double>(Q) < x, "need 1 <= Q < x");
  const PrimePowerSums sums(x);
  EhSum out;
  out.x = x;
  out.Q = Q;
  out.terms.resize(Q);
  parallel_for(Q, threads, [&](std::size_t i) {
    const std::uint64_t q = i + 1;
    const auto residues = sums.by_residue(q);
    const double main = x / static_cast<double>(euler_phi(q));
    EhTerm t;
    t.q = q;
    for (std::int64_t r : units_of(q, std::nullopt)) {
      const double e = std::abs(static_cast<double>(residues[residue_index(r, q)]) - main);
      if (e > t.max_error) t.max_error = e, t.argmax = r;
    }
    out.terms[i] = t;
  });
  CompensatedSum<double> total;
  for (const auto& t : out.terms) total += t.max_error;
  out.value = total.value();
  out.ratio = out.value / x;
  return out;
}

std::vector<WeakFormRow> weak_form_table(double x, const std::vector<std::uint64_t>& qs, double alpha,
                                         std::optional<std::int64_t> a, unsigned threads) {
  require(alpha >= 0 && alpha <= 1, "alpha must lie in [0, 1]");
  std::vector<WeakFormRow> rows;
  for (const auto& m : montgomery_table({x}, qs, a, threads)) {
    WeakFormRow row;
    row.x = x;
    row.q = m.q;
    row.a = m.a;
    row.alpha = alpha;
    row.error = m.error;
    row.normalizer = std::sqrt(x * std::pow(static_cast<double>(euler_phi(m.q)), alpha) / static_cast<double>(m.q));
    row.normalized = row.error / row.normalizer;
    rows.push_back(row);
  }
  return rows;
}

int dyadic_depth(double x, std::uint64_t q, double eps) {
  require(eps > 0 && eps < 1, "eps must lie in (0, 1)");
  const auto fits = [&](int J) { return std::pow(std::ldexp(x, -J), 1 - eps) >= static_cast<double>(q); };
  require(fits(0), "q exceeds x^(1 - eps)");
  int J = 0;
  while (fits(J + 1)) ++J;
  return J;
}

DyadicProfile dyadic_profile(double x, std::uint64_t q, std::int64_t a, double eps) {
  require_x(x);
  unit_residue(a, q);
  DyadicProfile out;
  out.x = x;
  out.q = q;
  out.a = a;
  out.eps = eps;
  out.J = dyadic_depth(x, q, eps);
  const double phi = static_cast<double>(euler_phi(q));
  std::vector<double> psi_at(out.J + 1);
  for (int j = 0; j <= out.J; ++j) psi_at[j] = psi_progression(std::ldexp(x, -j), q, a);
  CompensatedSum<double> sum;
  for (int j = 0; j < out.J; ++j) {
    DyadicBlock b;
    b.j = j;
    b.upper = std::ldexp(x, -j);
    b.error = psi_at[j] - psi_at[j + 1] - std::ldexp(x, -(j + 1)) / phi;
    b.normalized = b.error / std::sqrt(b.upper / static_cast<double>(q));
    sum += b.error;
    out.blocks.push_back(b);
  }
  out.tail_error = psi_at[out.J] - std::ldexp(x, -out.J) / phi;
  sum += out.tail_error;
  out.total_error = psi_progression(x, q, a) - x / phi;
  out.telescoping_residual = std::abs(sum.value() - out.total_error);
  return out;
}

}  // namespace dpc
