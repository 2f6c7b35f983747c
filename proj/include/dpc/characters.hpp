#pragma once

// Dirichlet characters mod q with exact values.
//
// The unit group (Z/qZ)* is decomposed over its prime-power factors. Each odd
// p^e contributes a cyclic factor generated by the smallest primitive root
// mod p^e; 4 contributes {-1}; 2^e with e >= 3 contributes {-1, 5}. A
// character is an exponent vector over these generators, and its canonical
// index is prod g_j^{e_j} mod q (so the principal character has index 1).
// Values are exact rational angles; floating point only appears when a value
// is rendered as a complex number.

#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dpc {

/// exp(2*pi*i*num/den), kept reduced with 0 <= num < den.
class UnitRoot {
 public:
  constexpr UnitRoot() = default;
  static UnitRoot from_angle(std::int64_t num, std::int64_t den);

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  /// Multiplicative order of the root.
  std::int64_t order() const noexcept { return den_; }

  UnitRoot operator*(const UnitRoot& other) const;
  UnitRoot conj() const;
  std::complex<double> value() const;
  template <class Real>
  std::complex<Real> value_as() const;

  friend bool operator==(const UnitRoot&, const UnitRoot&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

template <class Real>
std::complex<Real> UnitRoot::value_as() const {
  if ((4 * num_) % den_ == 0) {
    switch ((4 * num_) / den_) {
      case 0: return {Real(1), Real(0)};
      case 1: return {Real(0), Real(1)};
      case 2: return {Real(-1), Real(0)};
      default: return {Real(0), Real(-1)};
    }
  }
  const Real two_pi = Real(2) * Real(3.14159265358979323846264338327950288L);
  const Real angle = two_pi * Real(num_) / Real(den_);
  return {std::cos(angle), std::sin(angle)};
}

/// Value of a character at an integer: zero off the units.
using CharValue = std::optional<UnitRoot>;

/// Exact element of Z[zeta_m], used for exact character sums.
class CyclotomicInt {
 public:
  explicit CyclotomicInt(std::int64_t m);

  void add(const UnitRoot& root, std::int64_t coeff = 1);
  std::int64_t level() const noexcept { return m_; }
  /// The element as an integer if it is rational, after reduction modulo the
  /// m-th cyclotomic polynomial.
  std::optional<std::int64_t> as_integer() const;
  std::complex<double> value() const;

 private:
  std::int64_t m_;
  std::vector<std::int64_t> coeffs_;
};

struct CharacterLabel {
  std::uint64_t modulus = 1;
  std::uint64_t index = 1;

  friend auto operator<=>(const CharacterLabel&, const CharacterLabel&) = default;
  std::string to_string() const;  // "q:index"
  static CharacterLabel parse(const std::string& text);
};

/// Structure of (Z/qZ)* over the fixed generator choice.
class DirichletGroup {
 public:
  explicit DirichletGroup(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }
  std::uint64_t phi() const noexcept { return phi_; }
  /// lcm of generator orders; every character value is an exponent()-th root.
  std::uint64_t exponent() const noexcept { return exponent_; }
  std::size_t rank() const noexcept { return gens_.size(); }
  std::span<const std::uint64_t> generators() const noexcept { return gens_; }
  std::span<const std::uint64_t> orders() const noexcept { return orders_; }

  bool is_unit(std::int64_t n) const;
  /// Exponents of a unit over the generators.
  std::vector<std::uint64_t> discrete_log(std::int64_t n) const;
  /// prod g_j^{e_j} mod q.
  std::uint64_t element(std::span<const std::uint64_t> exponents) const;

  struct Component {
    std::uint64_t prime;
    int power;
    std::uint64_t prime_power;
    std::size_t first_gen;  // generators [first_gen, first_gen + gen_count)
    std::size_t gen_count;
    std::vector<std::uint64_t> local_gens;  // as residues mod prime_power
    // log table indexed by residue mod prime_power: one entry per generator
    std::vector<std::uint32_t> logs;
  };
  std::span<const Component> components() const noexcept { return comps_; }

 private:
  std::uint64_t q_;
  std::uint64_t phi_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<Component> comps_;
  std::vector<std::uint64_t> gens_;
  std::vector<std::uint64_t> orders_;
};

/// Shared, immutable group for modulus q.
std::shared_ptr<const DirichletGroup> dirichlet_group(std::uint64_t q);

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                     std::vector<std::uint64_t> exponents);
  static DirichletCharacter from_label(const CharacterLabel& label);
  static DirichletCharacter principal(std::uint64_t q);

  const CharacterLabel& label() const noexcept { return label_; }
  std::uint64_t modulus() const noexcept { return label_.modulus; }
  std::span<const std::uint64_t> exponents() const noexcept { return exponents_; }
  std::uint64_t order() const noexcept { return order_; }
  int parity() const noexcept { return parity_; }
  std::uint64_t conductor() const noexcept { return conductor_; }
  bool is_primitive() const noexcept { return conductor_ == label_.modulus; }
  bool is_principal() const noexcept { return order_ == 1; }
  bool is_real() const noexcept { return order_ <= 2; }
  const DirichletGroup& group() const noexcept { return *group_; }

  CharValue operator()(std::int64_t n) const;
  /// Rendered value; 0 off the units.
  std::complex<double> value(std::int64_t n) const;
  DirichletCharacter conj() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.label_ == b.label_;
  }

  /// Value of the local factor at a unit residue mod the component's p^e.
  UnitRoot angle_on_component(std::size_t comp, std::uint64_t residue) const;

 private:
  std::uint64_t compute_conductor() const;

  std::shared_ptr<const DirichletGroup> group_;
  std::vector<std::uint64_t> exponents_;
  CharacterLabel label_;
  std::uint64_t order_ = 1;
  int parity_ = 0;
  std::uint64_t conductor_ = 1;
};

/// All phi(q) characters mod q, principal first, then by ascending index.
std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);

CharValue eval_character(const DirichletCharacter& chi, std::int64_t n);

/// (q*, chi*) with chi* primitive mod q* inducing chi.
std::pair<std::uint64_t, DirichletCharacter> conductor_and_inducer(const DirichletCharacter& chi);

std::complex<double> gauss_sum(const DirichletCharacter& chi);

/// Exact table of sum_chi conj(chi(a)) chi(b) for residues a, b in [0, q).
class OrthogonalityTable {
 public:
  OrthogonalityTable(std::uint64_t q, std::vector<CyclotomicInt> entries)
      : q_(q), entries_(std::move(entries)) {}
  std::uint64_t modulus() const noexcept { return q_; }
  const CyclotomicInt& at(std::uint64_t a, std::uint64_t b) const { return entries_[a * q_ + b]; }

 private:
  std::uint64_t q_;
  std::vector<CyclotomicInt> entries_;
};

OrthogonalityTable orthogonality_matrix(std::uint64_t q);

// Elementary number theory shared across modules.
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

}  // namespace dpc
