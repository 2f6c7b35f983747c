#pragma once

// Critical-line zeros of Dirichlet L-functions: sign-change scanning of the
// rotated real function Z(t), bracket refinement, and a count-based
// completeness certificate.

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dpc/characters.hpp"

namespace dpc {

class ZeroCache;

struct ZeroRecord {
  double ordinate = 0;
  CharacterLabel character;
  double lo = 0;
  double hi = 0;
  double tolerance = 0;
  double residual = 0;  // |Z(ordinate)|
};

struct Completeness {
  double expected = 0;
  std::uint64_t found = 0;
  bool certified = false;
};

struct ZeroSet {
  CharacterLabel character;
  std::uint64_t conductor = 1;
  int parity = 0;
  double height = 0;
  double mesh_step = 0;
  double tolerance = 0;
  std::uint32_t branch_tag = 0;
  std::vector<ZeroRecord> records;  // increasing ordinate
  Completeness completeness;

  /// Ordinates with |gamma| <= T, in increasing order (T <= height).
  std::vector<double> ordinates(double T) const;
  std::vector<double> ordinates() const { return ordinates(height); }
  /// Copy restricted to |gamma| <= T with completeness recomputed at T.
  ZeroSet restricted(double T) const;
  /// Structural invariants: ordering, |gamma| <= height, bracket containment.
  void validate() const;
};

struct ScanOptions {
  double mesh_step = 0;          // 0: default_mesh_step
  double tolerance = 1e-11;      // final bracket width
  double target_abs_error = 1e-12;
  unsigned threads = 1;          // 0: hardware concurrency
  bool require_certified = true; // zeros_for_modulus only
};

/// min(0.05, 0.5 pi / log(q (T + 3))).
double default_mesh_step(std::uint64_t q, double T);
/// pi / log(q (T + 3)): the largest mesh scan_zeros accepts.
double max_mesh_step(std::uint64_t q, double T);

/// Counting-formula main term for zeros with |gamma| <= T, clamped at 0.
double count_expected(const DirichletCharacter& chi, double T);

/// All sign changes of Z on [-T, T] at mesh resolution, refined and certified.
/// chi must be primitive. An uncertified result is returned, not thrown.
ZeroSet scan_zeros(const DirichletCharacter& chi, double T, const ScanOptions& options = {});

/// Shrinks a sign-change bracket of Z to width <= tol and returns its midpoint.
double refine_zero(std::pair<double, double> bracket, const DirichletCharacter& chi, double tol);

/// Re-scans at half the mesh and reports whether the same zeros appear with
/// every ordinate moved by at most the set's tolerance.
bool stable_under_half_mesh(const ZeroSet& set, const DirichletCharacter& chi, unsigned threads = 1);

using ZeroSetMap = std::map<CharacterLabel, std::shared_ptr<const ZeroSet>>;

/// One zero set per character mod q. Imprimitive characters point at their
/// inducer's set, so the principal character shares the zeta set. Sets are
/// read from and written to `cache` when one is given.
ZeroSetMap zeros_for_modulus(std::uint64_t q, double T, const ScanOptions& options = {},
                             const ZeroCache* cache = nullptr);

/// The set for `label`, required to be present, certified and of height >= T.
const ZeroSet& certified_set(const ZeroSetMap& zeros, const CharacterLabel& label, double T);

}  // namespace dpc
