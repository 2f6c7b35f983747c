#pragma once

// Subcommands of the dpc executable. Each command validates its options,
// returns early on --dry-run, and writes one table to the configured sink.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpc/store.hpp"
#include "dpc/zeros.hpp"

namespace dpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCertification = 3;

struct RunConfig {
  std::filesystem::path cache_dir = ".dpc-cache";
  unsigned threads = 1;
  std::string format = "csv";
  std::string out = "-";  // "-" is standard output
  double mesh_step = 0;   // 0: default rule
  double tolerance = 1e-11;
  double integral_budget = 1e-8;
  bool json = false;
  bool dry_run = false;
  bool no_cache = false;

  void validate() const;
  ScanOptions scan_options() const;
  /// Zero sets for every character mod q at height T, through the cache.
  ZeroSetMap zeros(std::uint64_t q, double T) const;
};

/// Output of one command: a table plus a summary object. `status` is one of
/// the exit codes above.
struct Outcome {
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  int status = kExitOk;
};

struct ZerosOptions {
  std::uint64_t q = 0;
  double T = 0;
  std::string chi;  // "q:index", optional
};
Outcome run_zeros(const RunConfig& cfg, const ZerosOptions& o);

struct PsiOptions {
  double x = 0;
  std::optional<std::uint64_t> q;
  std::optional<std::int64_t> a;
  std::string chi;
};
Outcome run_psi(const RunConfig& cfg, const PsiOptions& o);

struct PairCorrOptions {
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double x = 0;
  double T = 0;
  std::string check;  // "", "integral" or "increment"
  double U = -1;      // increment lower height; default T / 2
  std::string hist;   // "alpha:beta:bins"
};
Outcome run_paircorr(const RunConfig& cfg, const PairCorrOptions& o);

struct ExplicitOptions {
  double x = 0;
  double Z = 0;
  std::uint64_t q = 1;
  std::optional<std::int64_t> a;
};
Outcome run_explicit(const RunConfig& cfg, const ExplicitOptions& o);

struct MontgomeryOptions {
  std::vector<double> x;
  std::uint64_t Q = 1;
  std::optional<std::int64_t> a;
};
Outcome run_montgomery(const RunConfig& cfg, const MontgomeryOptions& o);

struct EhOptions {
  double x = 0;
  std::uint64_t Q = 1;
};
Outcome run_eh(const RunConfig& cfg, const EhOptions& o);

struct WeakOptions {
  double x = 0;
  std::uint64_t Q = 1;
  std::vector<double> alpha;
  std::optional<std::int64_t> a;
};
Outcome run_weak(const RunConfig& cfg, const WeakOptions& o);

struct DyadicOptions {
  double x = 0;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  double eps = 0.1;
};
Outcome run_dyadic(const RunConfig& cfg, const DyadicOptions& o);

struct CheckOptions {
  std::string suite = "all";
  std::uint64_t q = 4;
  std::int64_t a = 1;
  double x = 3;
  double T = 15;
  double U = -1;
};
/// Identity suites; one row per check with residual, tolerance and verdict.
Outcome run_check(const RunConfig& cfg, const CheckOptions& o);
const std::vector<std::string>& check_suites();

struct ReportOptions {
  std::filesystem::path dir = "report";
  double T = 100;
  double x_max = 1e6;
};
/// Writes the CSV bundle and manifest.json into `dir`; the manifest lists
/// every file with its size and CRC-32 and the invariant verdicts.
Outcome run_report(const RunConfig& cfg, const ReportOptions& o);

/// Writes the table to cfg.out (unless --json with stdout) and the summary
/// to `out` as JSON or as key: value lines on `err`.
void emit(const RunConfig& cfg, const Outcome& outcome, std::ostream& out, std::ostream& err);

/// Parses "q:index".
CharacterLabel parse_label(const std::string& text);

}  // namespace dpc::cli
