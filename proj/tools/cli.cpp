#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "dpc/conjectures.hpp"
#include "dpc/error.hpp"
#include "dpc/explicit.hpp"
#include "dpc/paircorr.hpp"
#include "dpc/sieve.hpp"

namespace dpc::cli {

namespace fs = std::filesystem;

namespace {

Outcome dry(Table table) {
  Outcome o;
  o.table = std::move(table);
  o.summary["dry_run"] = true;
  o.summary["valid"] = true;
  return o;
}

std::vector<std::int64_t> units(std::uint64_t q, std::optional<std::int64_t> a) {
  if (a) {
    unit_residue(*a, q);
    return {*a};
  }
  std::vector<std::int64_t> out;
  for (std::uint64_t r = 1; r <= q; ++r)
    if (std::gcd(r % q, q) == 1) out.push_back(static_cast<std::int64_t>(r % q == 0 ? 1 : r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0, std::string(name) + " must be positive");
}

std::string regime(bool in_range) { return in_range ? "in-range" : "extrapolated"; }

nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

struct CheckRow {
  std::string suite;
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

void add_row(std::vector<CheckRow>& rows, std::string suite, std::string name, double value, double tol,
             bool pass) {
  rows.push_back({std::move(suite), std::move(name), value, tol, pass});
}

PairCorrInput pc_input(std::uint64_t q, std::int64_t a, double x, double T, const ZeroSetMap& zeros,
                       unsigned threads) {
  PairCorrInput in;
  in.q = q;
  in.a = a;
  in.x = x;
  in.T = T;
  in.zeros = &zeros;
  in.threads = threads;
  in.validate();
  return in;
}

IntegralSpec integral_spec(const RunConfig& cfg) {
  IntegralSpec s;
  s.budget = cfg.integral_budget;
  return s;
}

}  // namespace

CharacterLabel parse_label(const std::string& text) { return CharacterLabel::parse(text); }

void RunConfig::validate() const {
  require(threads <= 1024, "thread count must be at most 1024");
  parse_table_format(format);
  require(mesh_step >= 0 && std::isfinite(mesh_step), "mesh step must be nonnegative");
  require(tolerance > 0 && tolerance < 1e-3, "tolerance must lie in (0, 1e-3)");
  require(integral_budget > 0 && integral_budget < 1, "integral budget must lie in (0, 1)");
}

ScanOptions RunConfig::scan_options() const {
  ScanOptions s;
  s.mesh_step = mesh_step;
  s.tolerance = tolerance;
  s.threads = threads;
  return s;
}

ZeroSetMap RunConfig::zeros(std::uint64_t q, double T) const {
  if (no_cache) return zeros_for_modulus(q, T, scan_options());
  const ZeroCache cache(cache_dir);
  return zeros_for_modulus(q, T, scan_options(), &cache);
}

Outcome run_zeros(const RunConfig& cfg, const ZerosOptions& o) {
  std::optional<CharacterLabel> only;
  std::uint64_t q = o.q;
  if (!o.chi.empty()) {
    only = parse_label(o.chi);
    require(q == 0 || q == only->modulus, "--q and --chi disagree on the modulus");
    q = only->modulus;
    DirichletCharacter::from_label(*only);
  }
  require(q >= 1, "--q (or --chi) is required");
  require_positive(o.T, "T");
  require(o.T <= 1000, "T above 1000 is outside the supported evaluation range");
  if (cfg.mesh_step > 0) require(cfg.mesh_step <= max_mesh_step(q, o.T), "mesh step too coarse for q and T");
  Table table{{"q", "chi", "inducer", "gamma"}, {}};
  if (cfg.dry_run) return dry(table);

  auto scan = cfg.scan_options();
  scan.require_certified = false;
  std::vector<bool> cached;
  const ZeroCache cache(cfg.cache_dir);
  const auto chars = enumerate_characters(q);
  for (const auto& chi : chars) {
    const auto star = conductor_and_inducer(chi).second.label();
    cached.push_back(!cfg.no_cache && cache.load(star, o.T).has_value());
  }
  const auto sets = cfg.no_cache ? zeros_for_modulus(q, o.T, scan) : zeros_for_modulus(q, o.T, scan, &cache);

  Outcome out;
  out.table = table;
  bool all_certified = true;
  auto& list = out.summary["characters"] = nlohmann::json::array();
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto& label = chars[i].label();
    if (only && label != *only) continue;
    const ZeroSet& set = *sets.at(label);
    for (double g : set.ordinates(o.T))
      out.table.rows.push_back({static_cast<std::int64_t>(q), label.to_string(), set.character.to_string(), g});
    all_certified = all_certified && set.completeness.certified;
    list.push_back({{"chi", label.to_string()},
                    {"inducer", set.character.to_string()},
                    {"found", set.completeness.found},
                    {"expected", set.completeness.expected},
                    {"certified", set.completeness.certified},
                    {"cached", static_cast<bool>(cached[i])}});
  }
  out.summary["q"] = q;
  out.summary["T"] = o.T;
  out.summary["certified"] = all_certified;
  out.status = all_certified ? kExitOk : kExitCertification;
  return out;
}

Outcome run_psi(const RunConfig& cfg, const PsiOptions& o) {
  require(std::isfinite(o.x) && o.x >= 0, "x must be nonnegative");
  require(o.x <= 1e9, "x above 1e9 is outside the supported sieve range");
  if (!o.chi.empty()) {
    require(!o.q && !o.a, "--chi excludes --q and --a");
    const auto chi = DirichletCharacter::from_label(parse_label(o.chi));
    Table table{{"x", "chi", "re", "im"}, {}};
    if (cfg.dry_run) return dry(table);
    const auto v = psi_character(o.x, chi);
    Outcome out;
    out.table = table;
    out.table.rows.push_back({o.x, chi.label().to_string(), v.real(), v.imag()});
    out.summary["psi_chi"] = {v.real(), v.imag()};
    return out;
  }
  const std::uint64_t q = o.q.value_or(1);
  require(q >= 1, "q must be at least 1");
  const auto as = units(q, o.a);
  Table table{{"x", "q", "a", "psi", "main_term", "error"}, {}};
  if (cfg.dry_run) return dry(table);
  const auto by_residue = psi_by_residue(o.x, q);
  const double main = o.x / static_cast<double>(euler_phi(q));
  Outcome out;
  out.table = table;
  for (std::int64_t a : as) {
    const double v = static_cast<double>(by_residue[unit_residue(a, q)]);
    out.table.rows.push_back({o.x, static_cast<std::int64_t>(q), a, v, main, v - main});
  }
  out.summary["rows"] = out.table.rows.size();
  return out;
}

Outcome run_paircorr(const RunConfig& cfg, const PairCorrOptions& o) {
  require_positive(o.x, "x");
  require_positive(o.T, "T");
  require(o.T <= 1000, "T above 1000 is outside the supported evaluation range");
  unit_residue(o.a, o.q);
  require(o.check.empty() || o.check == "integral" || o.check == "increment",
          "--check must be integral or increment");
  const double U = o.U < 0 ? o.T / 2 : o.U;
  require(U < o.T || o.check != "increment", "increment check needs U < T");
  std::optional<std::array<double, 3>> hist;
  if (!o.hist.empty()) {
    require(o.q == 1, "histograms are built from zeta zeros; use --q 1");
    std::array<double, 3> h{};
    char c1 = 0, c2 = 0;
    std::istringstream in(o.hist);
    in >> h[0] >> c1 >> h[1] >> c2 >> h[2];
    require(in && c1 == ':' && c2 == ':' && in.peek() == EOF, "--hist expects alpha:beta:bins");
    require(h[0] < h[1] && h[2] >= 1 && h[2] <= 10000 && h[2] == std::floor(h[2]), "--hist needs alpha < beta, bins >= 1");
    hist = h;
  }
  Table table = hist ? Table{{"bin_center", "count_over_expected"}, {}}
                     : Table{{"q", "a", "x", "T", "ReF", "ImF", "ratio_to_thm15", "trivialBoundRatio", "regime"}, {}};
  if (cfg.dry_run) return dry(table);

  const auto zeros = cfg.zeros(o.q, o.T);
  Outcome out;
  out.table = table;
  if (hist) {
    const auto h = spacing_histogram(*zeros.at({1, 1}), o.T, (*hist)[0], (*hist)[1], static_cast<std::size_t>((*hist)[2]));
    for (std::size_t i = 0; i < h.counts.size(); ++i)
      out.table.rows.push_back({0.5 * (h.edges[i] + h.edges[i + 1]),
                                static_cast<double>(h.off_diagonal(i)) / h.expected[i]});
    out.summary["total_pairs"] = h.total_pairs;
    out.summary["includes_diagonal"] = h.includes_diagonal;
    out.summary["diagonal_pairs"] = h.diagonal_pairs;
    out.summary["diagonal_expected"] = h.diagonal_expected;
    out.summary["normalization"] = h.normalization;
    return out;
  }
  const auto in = pc_input(o.q, o.a, o.x, o.T, zeros, cfg.threads);
  const auto r = f_q(in);
  const auto ratio = f_q_asymptotic_ratio(r);
  out.table.rows.push_back({static_cast<std::int64_t>(o.q), o.a, o.x, o.T, r.value.real(), r.value.imag(), ratio.ratio,
                            r.trivial_bound_ratio, regime(ratio.in_range)});
  out.summary["F"] = {r.value.real(), r.value.imag()};
  out.summary["terms"] = r.term_count;
  if (r.trivial_bound_ratio > 1) out.summary["warning"] = "F_q exceeds the trivial bound";
  if (o.check == "integral") {
    const auto ig = f_q_via_integral(in, integral_spec(cfg));
    const double res = std::abs(ig.value - r.value.real()) / std::abs(r.value.real());
    out.summary["check"] = {{"kind", "integral"}, {"integral", ig.value}, {"V", ig.V}, {"residual", res},
                            {"pass", res < 1e-4}};
  } else if (o.check == "increment") {
    const auto ic = increment_identity_check(in, U, integral_spec(cfg));
    out.summary["check"] = {{"kind", "increment"},          {"U", U},
                            {"lhs", ic.lhs},                 {"rhs", ic.rhs},
                            {"residual", real_or_null(ic.residual)}, {"annulus_direct", ic.annulus_direct},
                            {"annulus_residual", real_or_null(ic.annulus_residual)},
                            {"pass", ic.residual < 1e-4}};
  }
  if (out.summary.contains("check") && !out.summary["check"]["pass"].get<bool>()) out.status = kExitFailure;
  return out;
}

Outcome run_explicit(const RunConfig& cfg, const ExplicitOptions& o) {
  require(std::isfinite(o.x) && std::isfinite(o.Z) && o.Z >= 2 && o.Z <= o.x, "need 2 <= Z <= x");
  require(o.Z <= 1000, "Z above 1000 is outside the supported evaluation range");
  require(o.x <= 1e9, "x above 1e9 is outside the supported sieve range");
  const auto as = units(o.q, o.a);
  Table table{{"x", "Z", "q", "a", "reconstructed", "exact", "absError", "budget", "measured_constant"}, {}};
  if (cfg.dry_run) return dry(table);
  const auto zeros = cfg.zeros(o.q, o.Z);
  Outcome out;
  out.table = table;
  for (std::int64_t a : as) {
    const auto run = o.q == 1 ? psi_from_zeros(o.x, o.Z, *zeros.at({1, 1}))
                              : psi_progression_from_zeros(o.x, o.Z, o.q, a, zeros);
    out.table.rows.push_back({o.x, o.Z, static_cast<std::int64_t>(o.q), a, run.reconstructed.real(), run.exact.real(),
                              run.abs_error, run.budget, run.measured_constant});
  }
  out.summary["rows"] = out.table.rows.size();
  return out;
}

namespace {

std::vector<std::uint64_t> moduli_up_to(std::uint64_t Q) {
  std::vector<std::uint64_t> qs(Q);
  std::iota(qs.begin(), qs.end(), 1);
  return qs;
}

std::vector<Cell> montgomery_cells(const MontgomeryRow& r) {
  return {r.x,         static_cast<std::int64_t>(r.q), r.a,         r.psi,       r.main_term, r.error,
          r.scale,     r.normalized,                   r.implied_epsilon, r.grh_scale, r.grh_ratio,
          std::string(r.grh_ratio <= 1 ? "within-grh-scale" : "above-grh-scale")};
}

const std::vector<std::string> kMontgomeryColumns{"x",         "q",          "a",         "psi",
                                                  "main_term", "error",      "scale",     "normalized",
                                                  "implied_epsilon", "grh_scale", "grh_ratio", "regime"};

void check_x(double x) {
  require(std::isfinite(x) && x >= 2 && x <= 1e9, "x must lie in [2, 1e9]");
}

}  // namespace

Outcome run_montgomery(const RunConfig& cfg, const MontgomeryOptions& o) {
  require(!o.x.empty(), "--x is required");
  for (double x : o.x) check_x(x);
  require(o.Q >= 1 && o.Q <= 100000, "Q must lie in [1, 1e5]");
  if (o.a)
    for (std::uint64_t q = 1; q <= o.Q; ++q) unit_residue(*o.a, q);
  Table table{kMontgomeryColumns, {}};
  if (cfg.dry_run) return dry(table);
  Outcome out;
  out.table = table;
  for (const auto& r : montgomery_table(o.x, moduli_up_to(o.Q), o.a, cfg.threads))
    out.table.rows.push_back(montgomery_cells(r));
  out.summary["rows"] = out.table.rows.size();
  return out;
}

Outcome run_eh(const RunConfig& cfg, const EhOptions& o) {
  check_x(o.x);
  require(o.Q >= 1 && static_cast<double>(o.Q) < o.x, "need 1 <= Q < x");
  Table table{{"x", "q", "argmax_a", "max_error"}, {}};
  if (cfg.dry_run) return dry(table);
  const auto e = eh_sum(o.x, o.Q, cfg.threads);
  Outcome out;
  out.table = table;
  for (const auto& t : e.terms)
    out.table.rows.push_back({o.x, static_cast<std::int64_t>(t.q), t.argmax, t.max_error});
  out.summary["x"] = o.x;
  out.summary["Q"] = o.Q;
  out.summary["value"] = e.value;
  out.summary["ratio"] = e.ratio;
  return out;
}

Outcome run_weak(const RunConfig& cfg, const WeakOptions& o) {
  check_x(o.x);
  require(o.Q >= 1 && o.Q <= 100000, "Q must lie in [1, 1e5]");
  require(!o.alpha.empty(), "--alpha is required");
  for (double a : o.alpha) require(a >= 0 && a <= 1, "alpha must lie in [0, 1]");
  if (o.a)
    for (std::uint64_t q = 1; q <= o.Q; ++q) unit_residue(*o.a, q);
  Table table{{"x", "q", "a", "alpha", "error", "normalizer", "normalized"}, {}};
  if (cfg.dry_run) return dry(table);
  Outcome out;
  out.table = table;
  for (double alpha : o.alpha)
    for (const auto& r : weak_form_table(o.x, moduli_up_to(o.Q), alpha, o.a, cfg.threads))
      out.table.rows.push_back(
          {r.x, static_cast<std::int64_t>(r.q), r.a, r.alpha, r.error, r.normalizer, r.normalized});
  out.summary["rows"] = out.table.rows.size();
  return out;
}

Outcome run_dyadic(const RunConfig& cfg, const DyadicOptions& o) {
  check_x(o.x);
  unit_residue(o.a, o.q);
  dyadic_depth(o.x, o.q, o.eps);
  Table table{{"x", "q", "a", "j", "upper", "error", "normalized", "kind"}, {}};
  if (cfg.dry_run) return dry(table);
  const auto p = dyadic_profile(o.x, o.q, o.a, o.eps);
  Outcome out;
  out.table = table;
  const auto q = static_cast<std::int64_t>(o.q);
  for (const auto& b : p.blocks)
    out.table.rows.push_back({o.x, q, o.a, static_cast<std::int64_t>(b.j), b.upper, b.error, b.normalized,
                              std::string("block")});
  const double tail_upper = std::ldexp(o.x, -p.J);
  out.table.rows.push_back({o.x, q, o.a, static_cast<std::int64_t>(p.J), tail_upper, p.tail_error,
                            p.tail_error / std::sqrt(tail_upper / static_cast<double>(o.q)), std::string("tail")});
  out.summary["J"] = p.J;
  out.summary["total_error"] = p.total_error;
  out.summary["telescoping_residual"] = p.telescoping_residual;
  out.summary["telescoping_holds"] = p.telescoping_residual < 1e-8 * std::sqrt(o.x);
  return out;
}

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> s{"integral", "increment", "realness",   "swap", "substitution",
                                          "orthogonality", "explicit", "bt", "sx", "meanvalue"};
  return s;
}

Outcome run_check(const RunConfig& cfg, const CheckOptions& o) {
  const auto& all = check_suites();
  require(o.suite == "all" || std::find(all.begin(), all.end(), o.suite) != all.end(),
          "unknown suite " + o.suite);
  require_positive(o.x, "x");
  require_positive(o.T, "T");
  require(o.T <= 200, "check suites run at T <= 200");
  require(o.q >= 1 && o.q <= 50, "check suites run at q <= 50");
  unit_residue(o.a, o.q);
  const double U = o.U < 0 ? o.T / 2 : o.U;
  require(U >= 0 && U <= o.T, "need 0 <= U <= T");
  Table table{{"suite", "check", "value", "tolerance", "pass"}, {}};
  if (cfg.dry_run) return dry(table);

  const auto wants = [&](const char* s) { return o.suite == "all" || o.suite == s; };
  std::vector<CheckRow> rows;
  const bool need_zeros = wants("integral") || wants("increment") || wants("realness") || wants("swap") ||
                          wants("substitution");
  ZeroSetMap zeros;
  if (need_zeros) zeros = cfg.zeros(o.q, o.T);

  if (need_zeros) {
    const auto in = pc_input(o.q, o.a, o.x, o.T, zeros, cfg.threads);
    const auto F = f_q(in).value;
    if (wants("integral")) {
      const auto ig = f_q_via_integral(in, integral_spec(cfg));
      add_row(rows, "integral", "relative residual", std::abs(ig.value - F.real()) / std::abs(F.real()), 1e-4,
              std::abs(ig.value - F.real()) < 1e-4 * std::abs(F.real()));
    }
    if (wants("increment")) {
      const auto ic = increment_identity_check(in, U, integral_spec(cfg));
      add_row(rows, "increment", "F_q(T) - F_q(U) residual", ic.residual, 1e-4, ic.residual < 1e-4);
      add_row(rows, "increment", "annulus pair-sum residual", ic.annulus_residual, 1e-4, ic.annulus_residual < 1e-4);
    }
    if (wants("realness")) {
      const double v = std::abs(F.imag()) / (1 + std::abs(F.real()));
      add_row(rows, "realness", "|Im F| / (1 + |Re F|)", v, 1e-9, v <= 1e-9);
    }
    if (wants("swap")) {
      double worst = 0;
      for (const auto& [l1, s1] : zeros)
        for (const auto& [l2, s2] : zeros) {
          const auto ab = g_pair(*s1, *s2, o.x, o.T);
          const auto ba = g_pair(*s2, *s1, o.x, o.T);
          worst = std::max(worst, std::abs(ab - std::conj(ba)) / (1 + std::abs(ab)));
        }
      add_row(rows, "swap", "max |G12 - conj G21| / (1 + |G12|)", worst, 1e-12, worst <= 1e-12);
    }
    if (wants("substitution")) {
      auto shifted = in;
      shifted.x = o.x * std::exp(0.7);
      const auto a = sigma_sum(in, 0.7), b = sigma_sum(shifted, 0);
      const double v = std::abs(a - b) / (1 + std::abs(a));
      add_row(rows, "substitution", "Sigma(x, T, v) vs Sigma(x e^v, T, 0)", v, 1e-12, v <= 1e-12);
    }
  }
  const double X = 1000.5;
  if (wants("orthogonality")) {
    double worst = 0;
    const auto chars = enumerate_characters(o.q);
    std::vector<std::complex<double>> twisted;
    for (const auto& chi : chars) twisted.push_back(psi_character(X, chi));
    for (std::int64_t a : units(o.q, std::nullopt)) {
      std::complex<double> acc{};
      for (std::size_t i = 0; i < chars.size(); ++i) acc += std::conj(chars[i].value(a)) * twisted[i];
      acc /= static_cast<double>(chars.size());
      worst = std::max(worst, std::abs(acc - psi_progression(X, o.q, a)));
    }
    add_row(rows, "orthogonality", "max |reconstructed - sieve| at x = 1000.5", worst, 1e-8, worst < 1e-8);
  }
  if (wants("explicit")) {
    const auto z = cfg.zeros(o.q, 100);
    const auto e30 = o.q == 1 ? psi_from_zeros(X, 30, *z.at({1, 1})) : psi_progression_from_zeros(X, 30, o.q, o.a, z);
    const auto e100 =
        o.q == 1 ? psi_from_zeros(X, 100, *z.at({1, 1})) : psi_progression_from_zeros(X, 100, o.q, o.a, z);
    add_row(rows, "explicit", "absError(Z=100) / absError(Z=30) at x = 1000.5", e100.abs_error / e30.abs_error, 1,
            e100.abs_error < e30.abs_error);
  }
  if (wants("bt")) {
    double worst = std::numeric_limits<double>::infinity();
    bool holds = true;
    for (double x : {0.0, 1e3, 1e6})
      for (double ratio : {2.0, 10.0, 100.0})
        for (std::int64_t a : units(o.q, std::nullopt)) {
          const auto b = brun_titchmarsh_check(x, ratio * static_cast<double>(o.q), o.q, a);
          holds = holds && b.holds;
          worst = std::min(worst, b.margin);
        }
    add_row(rows, "bt", "min margin", worst, 0, holds && worst > 0);
  }
  if (wants("sx")) {
    const double x = 1e6;
    const double phi = static_cast<double>(euler_phi(o.q));
    const auto s8 = s_of_x(x, o.q, 1, 8 * x);
    const auto s16 = s_of_x(x, o.q, 1, 16 * x);
    const double normalized = s8.value * phi / std::log(x);
    add_row(rows, "sx", "S(x) phi(q) / log x at x = 1e6", normalized, 0.2, normalized >= 0.8 && normalized <= 1.2);
    add_row(rows, "sx", "|S(16x cutoff) - S(8x cutoff)|", std::abs(s16.value - s8.value), s8.remainder,
            std::abs(s16.value - s8.value) < s8.remainder);
  }
  if (wants("meanvalue")) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> mu(0, 20), c(-1, 1);
    std::vector<Frequency> f;
    for (int i = 0; i < 50; ++i) f.push_back({mu(rng), c(rng)});
    const auto single = mean_value_check({{0.25, 1.5}}, 10, 0.25);
    add_row(rows, "meanvalue", "single frequency |exact - main|", std::abs(single.exact - single.main_term), 0,
            single.exact == single.main_term);
    const auto m = mean_value_check(f, 10, 0.25);
    add_row(rows, "meanvalue", "measured constant C", m.measured_constant, 4, m.measured_constant <= 4);
  }

  Outcome out;
  out.table = table;
  bool pass = true;
  auto& list = out.summary["checks"] = nlohmann::json::array();
  for (const auto& r : rows) {
    out.table.rows.push_back({r.suite, r.name, r.value, r.tolerance, std::string(r.pass ? "PASS" : "FAIL")});
    list.push_back({{"suite", r.suite}, {"check", r.name}, {"value", real_or_null(r.value)},
                    {"tolerance", r.tolerance}, {"pass", r.pass}});
    pass = pass && r.pass;
  }
  out.summary["pass"] = pass;
  out.status = pass ? kExitOk : kExitFailure;
  return out;
}

namespace {

// Writes one report file and records it for the manifest.
struct Bundle {
  fs::path dir;
  TableFormat format;
  nlohmann::json files = nlohmann::json::array();
  Table listing{{"file", "bytes", "crc32"}, {}};

  void write(const std::string& stem, const Table& t) {
    const std::string name = stem + (format == TableFormat::csv ? ".csv" : ".json");
    emit_table(t, format, dir / name);
    record(name);
  }
  void record(const std::string& name) {
    const auto bytes = static_cast<std::int64_t>(fs::file_size(dir / name));
    const auto crc = static_cast<std::int64_t>(file_crc32(dir / name));
    files.push_back({{"file", name}, {"bytes", bytes}, {"crc32", crc}});
    listing.rows.push_back({name, bytes, crc});
  }
};

}  // namespace

Outcome run_report(const RunConfig& cfg, const ReportOptions& o) {
  require(!o.dir.empty(), "--dir is required");
  require(o.T >= 15 && o.T <= 200, "report height must lie in [15, 200]");
  require(o.x_max >= 1e4 && o.x_max <= 1e7, "report x range must lie in [1e4, 1e7]");
  Bundle bundle{o.dir, parse_table_format(cfg.format)};
  if (cfg.dry_run) return dry(bundle.listing);
  fs::create_directories(o.dir);
  nlohmann::json invariants = nlohmann::json::object();

  // Pair correlation of zeta zeros and its normalized ratio.
  const auto z1 = cfg.zeros(1, o.T);
  const ZeroSet& zeta = *z1.at({1, 1});
  {
    Table t{{"x", "T", "F", "ratio", "regime"}, {}};
    for (double x : {1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 1000.0}) {
      const auto r = f_zeta_ratio(x, o.T, zeta);
      t.rows.push_back({x, o.T, r.F, r.ratio, regime(r.in_proven_range)});
    }
    bundle.write("zeta_ratio", t);
  }
  {
    Table t{{"q", "a", "x", "T", "ReF", "ImF", "main_term", "ratio_to_thm15", "trivialBoundRatio", "regime"}, {}};
    bool real = true;
    for (std::uint64_t q : {1, 3, 4, 5}) {
      const auto zs = cfg.zeros(q, o.T);
      for (std::int64_t a : units(q, std::nullopt))
        for (double x : {2.0, 3.0, 5.0, 10.0}) {
          const auto r = f_q(pc_input(q, a, x, o.T, zs, cfg.threads));
          const auto ratio = f_q_asymptotic_ratio(r);
          real = real && std::abs(r.value.imag()) <= 1e-9 * (1 + std::abs(r.value.real()));
          t.rows.push_back({static_cast<std::int64_t>(q), a, x, o.T, r.value.real(), r.value.imag(), ratio.main_term,
                            ratio.ratio, r.trivial_bound_ratio, regime(ratio.in_range)});
        }
    }
    invariants["fq_realness"] = real;
    bundle.write("fq_ratio", t);
  }
  {
    const auto h = spacing_histogram(zeta, o.T, 0, 3, 12);
    Table t{{"bin_center", "count_over_expected", "count", "off_diagonal_count", "expected", "gue_density"}, {}};
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double c = 0.5 * (h.edges[i] + h.edges[i + 1]);
      t.rows.push_back({c, static_cast<double>(h.off_diagonal(i)) / h.expected[i],
                        static_cast<std::int64_t>(h.counts[i]), static_cast<std::int64_t>(h.off_diagonal(i)),
                        h.expected[i], gue_density(c)});
      sum += h.counts[i];
    }
    invariants["histogram_pair_count"] = sum == h.total_pairs;
    bundle.write("gue_histogram", t);
    Table curve{{"u", "gue_density"}, {}};
    for (int i = 0; i <= 300; ++i) curve.rows.push_back({i / 100.0, gue_density(i / 100.0)});
    bundle.write("gue_curve", curve);
  }

  // Prime-side tables.
  std::vector<double> xs;
  for (double x = 1e4; x <= o.x_max * (1 + 1e-12); x *= 10) xs.push_back(x);
  {
    Table t{kMontgomeryColumns, {}};
    for (const auto& r : montgomery_table(xs, moduli_up_to(50), std::nullopt, cfg.threads))
      t.rows.push_back(montgomery_cells(r));
    bundle.write("montgomery", t);
  }
  {
    Table t{{"x", "Q", "value", "ratio", "regime"}, {}};
    bool monotone = true;
    for (double x : xs) {
      std::vector<std::uint64_t> ladder{1, 2, 5, 10, 20, 50, 100, static_cast<std::uint64_t>(std::cbrt(x))};
      std::sort(ladder.begin(), ladder.end());
      ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
      double prev = 0;
      for (std::uint64_t Q : ladder) {
        const auto e = eh_sum(x, Q, cfg.threads);
        monotone = monotone && e.value >= prev;
        prev = e.value;
        t.rows.push_back({x, static_cast<std::int64_t>(Q), e.value, e.ratio,
                          std::string(static_cast<double>(Q) <= std::cbrt(x) ? "Q<=x^(1/3)" : "Q>x^(1/3)")});
      }
    }
    invariants["eh_monotone_in_Q"] = monotone;
    bundle.write("eh", t);
  }
  {
    Table t{{"x", "q", "a", "alpha", "error", "normalizer", "normalized"}, {}};
    for (double alpha : {0.0, 0.5, 1.0})
      for (const auto& r : weak_form_table(xs.back(), moduli_up_to(1000), alpha, std::int64_t{1}, cfg.threads))
        t.rows.push_back({r.x, static_cast<std::int64_t>(r.q), r.a, r.alpha, r.error, r.normalizer, r.normalized});
    bundle.write("weak", t);
  }
  {
    Table t{{"x", "q", "a", "j", "upper", "error", "normalized", "kind"}, {}};
    bool telescoping = true;
    for (std::uint64_t q : {1, 3, 8, 101}) {
      DyadicOptions d{xs.back(), q, 1, 0.1};
      RunConfig inner = cfg;
      inner.dry_run = false;
      const auto part = run_dyadic(inner, d);
      telescoping = telescoping && part.summary.at("telescoping_holds").get<bool>();
      t.rows.insert(t.rows.end(), part.table.rows.begin(), part.table.rows.end());
    }
    invariants["dyadic_telescoping"] = telescoping;
    bundle.write("dyadic", t);
  }

  bool ok = true;
  for (const auto& [k, v] : invariants.items()) ok = ok && v.get<bool>();
  nlohmann::json manifest{{"parameters", {{"T", o.T}, {"x_max", o.x_max}, {"format", cfg.format}}},
                          {"files", bundle.files},
                          {"invariants", invariants}};
  {
    std::ofstream m(o.dir / "manifest.json", std::ios::binary | std::ios::trunc);
    m << manifest.dump(2) << '\n';
    require(static_cast<bool>(m), "cannot write manifest", Errc::io);
  }

  Outcome out;
  out.table = bundle.listing;
  out.summary = manifest;
  out.summary["invariants_hold"] = ok;
  out.status = ok ? kExitOk : kExitFailure;
  return out;
}

void emit(const RunConfig& cfg, const Outcome& outcome, std::ostream& out, std::ostream& err) {
  const auto format = parse_table_format(cfg.format);
  const bool dry_run = outcome.summary.contains("dry_run");
  if (!dry_run) {
    if (cfg.out != "-") {
      emit_table(outcome.table, format, cfg.out);
    } else if (!cfg.json) {
      TableWriter w(out, format, outcome.table.columns);
      for (const auto& row : outcome.table.rows) w.row(row);
      w.close();
    }
  }
  if (cfg.json) {
    out << outcome.summary.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : outcome.summary.items())
      if (!v.is_array() && !v.is_object()) err << k << ": " << v.dump() << '\n';
  }
}

}  // namespace dpc::cli
