#include "dpc/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <boost/math/tools/toms748_solve.hpp>

#include "dpc/error.hpp"
#include "dpc/lfunc.hpp"
#include "dpc/parallel.hpp"
#include "dpc/store.hpp"

namespace dpc {

namespace {

constexpr double kPi = std::numbers::pi;

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Narrows [lo, hi] (f(lo), f(hi) of opposite sign) to width <= tol, or to
// adjacent doubles when tol is below the local spacing.
template <class F>
std::pair<double, double> narrow(const F& f, double lo, double hi, double flo, double fhi, double tol) {
  if (flo == 0) return {lo, lo};
  if (fhi == 0) return {hi, hi};
  const double floor_tol = 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  const double eff_tol = std::max(tol, floor_tol);
  if (hi - lo > eff_tol) {
    std::uintmax_t max_iter = 100;
    auto done = [eff_tol](double a, double b) { return std::abs(b - a) <= eff_tol; };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, max_iter);
    if (a == b) return {a, b};
    const double fa = f(a), fb = f(b);
    if (sign_of(fa) * sign_of(fb) < 0) {
      lo = a, hi = b, flo = fa, fhi = fb;
    } else if (fa == 0) {
      return {a, a};
    } else if (fb == 0) {
      return {b, b};
    }
  }
  // Plain bisection for whatever toms748 left over.
  while (hi - lo > eff_tol) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0) return {mid, mid};
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid, flo = fm;
    } else {
      hi = mid, fhi = fm;
    }
  }
  return {lo, hi};
}

struct Bracket {
  double lo, hi, flo, fhi;
};

}  // namespace

std::vector<double> ZeroSet::ordinates(double T) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (std::abs(r.ordinate) <= T) out.push_back(r.ordinate);
  return out;
}

ZeroSet ZeroSet::restricted(double T) const {
  require(T > 0 && T <= height, "restriction height must lie in (0, " + std::to_string(height) + "]");
  ZeroSet out = *this;
  out.height = T;
  out.records.clear();
  for (const auto& r : records)
    if (std::abs(r.ordinate) <= T) out.records.push_back(r);
  out.completeness.found = out.records.size();
  out.completeness.expected = count_expected(DirichletCharacter::from_label(character), T);
  out.completeness.certified =
      completeness.certified &&
      std::abs(static_cast<double>(out.completeness.found) - std::round(out.completeness.expected)) <= 2;
  return out;
}

void ZeroSet::validate() const {
  const std::string who = "zero set " + character.to_string();
  require(height > 0, who + ": non-positive height", Errc::invariant);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    require(std::isfinite(r.ordinate) && std::abs(r.ordinate) <= height,
            who + ": ordinate outside [-T, T]", Errc::invariant);
    require(r.lo <= r.ordinate && r.ordinate <= r.hi, who + ": bracket does not contain ordinate",
            Errc::invariant);
    if (i > 0)
      require(records[i - 1].ordinate < r.ordinate, who + ": ordinates not strictly increasing",
              Errc::invariant);
  }
  require(completeness.found == records.size(), who + ": found count disagrees with records",
          Errc::invariant);
}

double max_mesh_step(std::uint64_t q, double T) {
  return kPi / std::log(static_cast<double>(q) * (T + 3));
}

double default_mesh_step(std::uint64_t q, double T) {
  return std::min(0.05, 0.5 * max_mesh_step(q, T));
}

double count_expected(const DirichletCharacter& chi, double T) {
  require(T > 0 && std::isfinite(T), "count_expected needs finite T > 0");
  const double q = static_cast<double>(chi.conductor());
  const double two_pi_e = 2 * kPi * std::numbers::e;
  double n;
  if (chi.conductor() == 1)
    n = 2 * (T / (2 * kPi)) * std::log(T / two_pi_e) + 1.75;
  else
    n = (T / kPi) * std::log(q * T / two_pi_e);
  return std::max(0.0, n);
}

double refine_zero(std::pair<double, double> bracket, const DirichletCharacter& chi, double tol) {
  auto [lo, hi] = bracket;
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "refine_zero needs a bracket with lo < hi");
  require(tol > 0, "refine_zero needs tol > 0");
  const auto star = conductor_and_inducer(chi).second;
  HardyZEvaluator z(star, std::max(std::abs(lo), std::abs(hi)));
  const double flo = z(lo), fhi = z(hi);
  require(sign_of(flo) * sign_of(fhi) <= 0, "refine_zero: Z has the same sign at both bracket ends");
  const auto [a, b] = narrow(z, lo, hi, flo, fhi, tol);
  return a + (b - a) / 2;
}

ZeroSet scan_zeros(const DirichletCharacter& chi, double T, const ScanOptions& options) {
  require(T > 0 && std::isfinite(T), "scan_zeros needs finite T > 0");
  require(chi.is_primitive(), "scan_zeros needs a primitive character, got " + chi.label().to_string());
  require(options.tolerance > 0, "scan tolerance must be positive");
  const std::uint64_t q = chi.modulus();
  const double h = options.mesh_step > 0 ? options.mesh_step : default_mesh_step(q, T);
  require(h <= max_mesh_step(q, T) * (1 + 1e-12),
          "mesh step " + std::to_string(h) + " exceeds pi/log(q(T+3)) = " + std::to_string(max_mesh_step(q, T)));

  const HardyZEvaluator z(chi, T, options.target_abs_error);
  const auto steps = static_cast<std::size_t>(std::ceil(2 * T / h));
  const double step = 2 * T / static_cast<double>(steps);
  std::vector<double> t(steps + 1), v(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = (k == steps) ? T : -T + step * static_cast<double>(k);
  parallel_for(steps + 1, options.threads, [&](std::size_t k) {
    double val = z(t[k]);
    // Nudge off an exact zero sample so every sign is strict.
    if (val == 0) val = z(std::min(T, t[k] + 1e-7 * step));
    v[k] = val;
  });

  std::vector<Bracket> brackets;
  for (std::size_t k = 0; k < steps; ++k)
    if (sign_of(v[k]) * sign_of(v[k + 1]) < 0) brackets.push_back({t[k], t[k + 1], v[k], v[k + 1]});

  // Half-step pass at local minima of |Z| with no sign change around them.
  std::vector<std::size_t> weak;
  for (std::size_t k = 1; k < steps; ++k) {
    const bool quiet = sign_of(v[k - 1]) == sign_of(v[k]) && sign_of(v[k]) == sign_of(v[k + 1]);
    if (quiet && std::abs(v[k]) < std::abs(v[k - 1]) && std::abs(v[k]) < std::abs(v[k + 1])) weak.push_back(k);
  }
  std::vector<std::array<double, 2>> probe(weak.size());
  parallel_for(weak.size(), options.threads, [&](std::size_t i) {
    const std::size_t k = weak[i];
    probe[i] = {z(t[k] - step / 2), z(t[k] + step / 2)};
  });
  for (std::size_t i = 0; i < weak.size(); ++i) {
    const std::size_t k = weak[i];
    const double pt[5] = {t[k - 1], t[k] - step / 2, t[k], t[k] + step / 2, t[k + 1]};
    const double pv[5] = {v[k - 1], probe[i][0], v[k], probe[i][1], v[k + 1]};
    for (int j = 0; j < 4; ++j)
      if (sign_of(pv[j]) * sign_of(pv[j + 1]) < 0) brackets.push_back({pt[j], pt[j + 1], pv[j], pv[j + 1]});
  }
  std::sort(brackets.begin(), brackets.end(), [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });

  ZeroSet out;
  out.character = chi.label();
  out.conductor = chi.conductor();
  out.parity = chi.parity();
  out.height = T;
  out.mesh_step = h;
  out.tolerance = options.tolerance;
  out.branch_tag = kRotationBranchTag;
  out.records.resize(brackets.size());
  std::vector<char> residual_ok(brackets.size(), 0);
  parallel_for(brackets.size(), options.threads, [&](std::size_t i) {
    const auto& b = brackets[i];
    const auto [lo, hi] = narrow(z, b.lo, b.hi, b.flo, b.fhi, options.tolerance);
    auto& r = out.records[i];
    r.character = chi.label();
    r.lo = lo;
    r.hi = hi;
    r.ordinate = lo + (hi - lo) / 2;
    r.tolerance = options.tolerance;
    r.residual = std::abs(z(r.ordinate));
    const double scale = std::max(std::abs(b.flo), std::abs(b.fhi));
    residual_ok[i] = r.residual < 1e-6 * (1 + scale);
  });

  bool separated = true;
  for (std::size_t i = 1; i < out.records.size(); ++i)
    if (out.records[i].ordinate - out.records[i - 1].ordinate <= options.tolerance) separated = false;
  const bool residuals =
      std::all_of(residual_ok.begin(), residual_ok.end(), [](char ok) { return ok != 0; });

  out.completeness.found = out.records.size();
  out.completeness.expected = count_expected(chi, T);
  out.completeness.certified =
      separated && residuals &&
      std::abs(static_cast<double>(out.completeness.found) - std::round(out.completeness.expected)) <= 2;
  if (separated) out.validate();
  return out;
}

bool stable_under_half_mesh(const ZeroSet& set, const DirichletCharacter& chi, unsigned threads) {
  require(chi.label() == set.character, "stability check: character does not match zero set");
  ScanOptions opt;
  opt.mesh_step = set.mesh_step / 2;
  opt.tolerance = set.tolerance;
  opt.threads = threads;
  const ZeroSet fine = scan_zeros(chi, set.height, opt);
  if (fine.records.size() != set.records.size()) return false;
  for (std::size_t i = 0; i < fine.records.size(); ++i)
    if (std::abs(fine.records[i].ordinate - set.records[i].ordinate) > set.tolerance) return false;
  return true;
}

const ZeroSet& certified_set(const ZeroSetMap& zeros, const CharacterLabel& label, double T) {
  const auto it = zeros.find(label);
  require(it != zeros.end() && it->second, "no zero set for character " + label.to_string());
  const ZeroSet& set = *it->second;
  require(set.completeness.certified, "zero set for " + label.to_string() + " is not certified", Errc::not_certified);
  require(set.height >= T, "zero set for " + label.to_string() + " only reaches height " +
                               std::to_string(set.height) + " < T = " + std::to_string(T));
  return set;
}

ZeroSetMap zeros_for_modulus(std::uint64_t q, double T, const ScanOptions& options, const ZeroCache* cache) {
  require(q >= 1, "modulus must be at least 1");
  require(T > 0 && std::isfinite(T), "zeros_for_modulus needs finite T > 0");
  const auto chars = enumerate_characters(q);

  std::vector<DirichletCharacter> inducers;
  std::vector<CharacterLabel> inducer_of;
  std::set<CharacterLabel> seen;
  for (const auto& chi : chars) {
    auto star = conductor_and_inducer(chi).second;
    inducer_of.push_back(star.label());
    if (seen.insert(star.label()).second) inducers.push_back(std::move(star));
  }

  std::vector<std::shared_ptr<const ZeroSet>> sets(inducers.size());
  parallel_for(inducers.size(), options.threads, [&](std::size_t i) {
    const auto& star = inducers[i];
    try {
      if (cache) {
        auto hit = cache->load(star.label(), T);
        if (hit && (hit->completeness.certified || !options.require_certified)) {
          sets[i] = std::make_shared<const ZeroSet>(std::move(*hit));
          return;
        }
      }
      ScanOptions one = options;
      one.threads = 1;
      ZeroSet set = scan_zeros(star, T, one);
      if (cache) cache->save(set);
      require(set.completeness.certified || !options.require_certified,
              "found " + std::to_string(set.completeness.found) + " zeros, expected about " +
                  std::to_string(set.completeness.expected),
              Errc::not_certified);
      sets[i] = std::make_shared<const ZeroSet>(std::move(set));
    } catch (const Error& e) {
      throw Error(e.code(), "character " + star.label().to_string() + ": " + e.detail());
    }
  });

  std::map<CharacterLabel, std::shared_ptr<const ZeroSet>> by_inducer;
  for (std::size_t i = 0; i < inducers.size(); ++i) by_inducer[inducers[i].label()] = sets[i];
  ZeroSetMap out;
  for (std::size_t i = 0; i < chars.size(); ++i) out[chars[i].label()] = by_inducer.at(inducer_of[i]);
  return out;
}

}  // namespace dpc
