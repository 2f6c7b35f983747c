#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "cli.hpp"
#include "dpc/error.hpp"

using namespace dpc::cli;

namespace {

template <class T>
std::optional<T> if_given(const CLI::Option* opt, const T& value) {
  return opt->count() ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet L-function zeros, pair correlation and prime-progression measurements"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file of option values ([section] per subcommand)");

  RunConfig cfg;
  std::string cache_dir = cfg.cache_dir.string();
  app.add_option("--cache-dir", cache_dir, "Zero-cache directory")->envname("DPC_CACHE_DIR")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--format", cfg.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", cfg.out, "Table destination (- for standard output)")->capture_default_str();
  app.add_option("--mesh", cfg.mesh_step, "Zero-scan mesh step (0: default rule)")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "Zero bracket width")->capture_default_str();
  app.add_option("--budget", cfg.integral_budget, "Relative truncation budget of the v-integral")
      ->capture_default_str();
  app.add_flag("--json", cfg.json, "Print a JSON summary on standard output");
  app.add_flag("--dry-run", cfg.dry_run, "Validate inputs without computing");
  app.add_flag("--no-cache", cfg.no_cache, "Neither read nor write the zero cache");

  auto* zeros = app.add_subcommand("zeros", "Scan and certify critical-line zeros of every character mod q");
  ZerosOptions zo;
  zeros->add_option("--q", zo.q, "Modulus");
  zeros->add_option("--T", zo.T, "Height")->required();
  zeros->add_option("--chi", zo.chi, "Single character q:index");

  auto* psi = app.add_subcommand("psi", "Chebyshev psi in progressions or twisted by a character");
  PsiOptions po;
  std::uint64_t psi_q = 1;
  std::int64_t psi_a = 1;
  psi->add_option("--x", po.x)->required();
  auto* psi_q_opt = psi->add_option("--q", psi_q);
  auto* psi_a_opt = psi->add_option("--a", psi_a);
  psi->add_option("--chi", po.chi, "Character q:index");

  auto* pc = app.add_subcommand("paircorr", "F_q(x, T) with optional identity checks or a gap histogram");
  PairCorrOptions pco;
  pc->add_option("--q", pco.q)->capture_default_str();
  pc->add_option("--a", pco.a)->capture_default_str();
  pc->add_option("--x", pco.x)->required();
  pc->add_option("--T", pco.T)->required();
  pc->add_option("--check", pco.check, "integral or increment")->check(CLI::IsMember({"integral", "increment"}));
  pc->add_option("--U", pco.U, "Lower height for --check increment (default T/2)");
  pc->add_option("--hist", pco.hist, "alpha:beta:bins gap histogram (q = 1)");

  auto* ex = app.add_subcommand("explicit", "psi rebuilt from zeros up to height Z against the sieve");
  ExplicitOptions eo;
  std::int64_t ex_a = 1;
  ex->add_option("--x", eo.x)->required();
  ex->add_option("--Z", eo.Z)->required();
  ex->add_option("--q", eo.q)->capture_default_str();
  auto* ex_a_opt = ex->add_option("--a", ex_a);

  auto* mg = app.add_subcommand("montgomery", "Progression errors normalized by sqrt(x/q), all q <= Q");
  MontgomeryOptions mo;
  std::int64_t mg_a = 1;
  mg->add_option("--x", mo.x, "One or more x")->required();
  mg->add_option("--Q", mo.Q)->required();
  auto* mg_a_opt = mg->add_option("--a", mg_a);

  auto* eh = app.add_subcommand("eh", "Sum over q <= Q of the maximal progression error");
  EhOptions ho;
  eh->add_option("--x", ho.x)->required();
  eh->add_option("--Q", ho.Q)->required();

  auto* weak = app.add_subcommand("weak", "Errors normalized by sqrt(x phi(q)^alpha / q)");
  WeakOptions wo;
  std::int64_t weak_a = 1;
  weak->add_option("--x", wo.x)->required();
  weak->add_option("--Q", wo.Q)->required();
  weak->add_option("--alpha", wo.alpha, "One or more exponents in [0, 1]")->required();
  auto* weak_a_opt = weak->add_option("--a", weak_a);

  auto* dy = app.add_subcommand("dyadic", "Dyadic block errors of psi(x; q, a)");
  DyadicOptions dop;
  dy->add_option("--x", dop.x)->required();
  dy->add_option("--q", dop.q)->required();
  dy->add_option("--a", dop.a)->capture_default_str();
  dy->add_option("--eps", dop.eps)->capture_default_str();

  auto* ck = app.add_subcommand("check", "Run identity suites and report residuals");
  CheckOptions co;
  std::string suites = "all";
  for (const auto& s : check_suites()) suites += "|" + s;
  ck->add_option("--suite", co.suite, suites)->capture_default_str();
  ck->add_option("--q", co.q)->capture_default_str();
  ck->add_option("--a", co.a)->capture_default_str();
  ck->add_option("--x", co.x)->capture_default_str();
  ck->add_option("--T", co.T)->capture_default_str();
  ck->add_option("--U", co.U, "Lower height for the increment suite (default T/2)");

  auto* rp = app.add_subcommand("report", "Write the CSV report bundle and its manifest");
  ReportOptions ro;
  std::string report_dir = ro.dir.string();
  rp->add_option("--dir", report_dir)->capture_default_str();
  rp->add_option("--T", ro.T)->capture_default_str();
  rp->add_option("--x-max", ro.x_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cfg.cache_dir = cache_dir;
    cfg.validate();
    Outcome outcome;
    if (zeros->parsed()) {
      outcome = run_zeros(cfg, zo);
    } else if (psi->parsed()) {
      po.q = if_given(psi_q_opt, psi_q);
      po.a = if_given(psi_a_opt, psi_a);
      outcome = run_psi(cfg, po);
    } else if (pc->parsed()) {
      outcome = run_paircorr(cfg, pco);
    } else if (ex->parsed()) {
      eo.a = if_given(ex_a_opt, ex_a);
      outcome = run_explicit(cfg, eo);
    } else if (mg->parsed()) {
      mo.a = if_given(mg_a_opt, mg_a);
      outcome = run_montgomery(cfg, mo);
    } else if (eh->parsed()) {
      outcome = run_eh(cfg, ho);
    } else if (weak->parsed()) {
      wo.a = if_given(weak_a_opt, weak_a);
      outcome = run_weak(cfg, wo);
    } else if (dy->parsed()) {
      outcome = run_dyadic(cfg, dop);
    } else if (ck->parsed()) {
      outcome = run_check(cfg, co);
    } else {
      ro.dir = report_dir;
      outcome = run_report(cfg, ro);
    }
    emit(cfg, outcome, std::cout, std::cerr);
    return outcome.status;
  } catch (const dpc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case dpc::Errc::invalid_argument:
        std::cerr << "run with --help for usage\n";
        return kExitValidation;
      case dpc::Errc::not_certified:
        return kExitCertification;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
