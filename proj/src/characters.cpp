#include "dpc/characters.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

#include "dpc/error.hpp"

namespace dpc {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / gcd_u64(a, b) * b; }

// Inverse of a mod m for gcd(a, m) = 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

std::uint64_t smallest_primitive_root(std::uint64_t p, std::uint64_t pe) {
  const std::uint64_t order = pe / p * (p - 1);
  const auto order_factors = factorize(order);
  for (std::uint64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& [ell, unused] : order_factors) {
      if (pow_mod(g, order / ell, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // pe == 2
}

std::uint64_t reduce_mod(std::int64_t n, std::uint64_t q) {
  const auto m = static_cast<std::int64_t>(q);
  std::int64_t r = n % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

// Coefficients (low to high) of the m-th cyclotomic polynomial.
const std::vector<std::int64_t>& cyclotomic_poly(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, std::vector<std::int64_t>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  // x^m - 1 divided by Phi_d for every proper divisor d.
  std::vector<std::int64_t> num(static_cast<std::size_t>(m) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(m)] = 1;
  for (std::int64_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    const auto& div = cyclotomic_poly(d);
    const std::size_t dd = div.size() - 1;
    const std::size_t nd = num.size() - 1;
    std::vector<std::int64_t> quot(nd - dd + 1, 0);
    for (std::size_t i = nd + 1; i-- > dd;) {
      const std::int64_t c = num[i];
      if (c == 0) continue;
      quot[i - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * div[j];
    }
    num = std::move(quot);
  }
  std::lock_guard lock(mu);
  return cache.emplace(m, std::move(num)).first->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// elementary arithmetic

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  require(n >= 1, "euler_phi of 0");
  std::uint64_t phi = n;
  for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  std::uint64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1U;
  }
  return result;
}

// ---------------------------------------------------------------------------
// UnitRoot / CyclotomicInt

UnitRoot UnitRoot::from_angle(std::int64_t num, std::int64_t den) {
  require(den > 0, "unit root denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  const std::int64_t g = std::gcd(num, den);
  UnitRoot r;
  r.num_ = num / g;
  r.den_ = den / g;
  return r;
}

UnitRoot UnitRoot::operator*(const UnitRoot& other) const {
  const std::int64_t den = std::lcm(den_, other.den_);
  return from_angle(num_ * (den / den_) + other.num_ * (den / other.den_), den);
}

UnitRoot UnitRoot::conj() const { return from_angle(-num_, den_); }

std::complex<double> UnitRoot::value() const { return value_as<double>(); }

CyclotomicInt::CyclotomicInt(std::int64_t m) : m_(m), coeffs_(static_cast<std::size_t>(m), 0) {
  require(m >= 1, "cyclotomic level must be positive");
}

void CyclotomicInt::add(const UnitRoot& root, std::int64_t coeff) {
  require(m_ % root.denominator() == 0, "unit root not in this cyclotomic ring");
  coeffs_[static_cast<std::size_t>(root.numerator() * (m_ / root.denominator()))] += coeff;
}

std::optional<std::int64_t> CyclotomicInt::as_integer() const {
  const auto& phi = cyclotomic_poly(m_);
  const std::size_t deg = phi.size() - 1;
  std::vector<std::int64_t> r = coeffs_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const std::int64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  for (std::size_t i = 1; i < deg; ++i)
    if (r[i] != 0) return std::nullopt;
  return r[0];
}

std::complex<double> CyclotomicInt::value() const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0)
      acc += static_cast<double>(coeffs_[k]) *
             UnitRoot::from_angle(static_cast<std::int64_t>(k), m_).value();
  return acc;
}

// ---------------------------------------------------------------------------
// labels

std::string CharacterLabel::to_string() const {
  return std::to_string(modulus) + ":" + std::to_string(index);
}

CharacterLabel CharacterLabel::parse(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "character label must look like q:index, got '" + text + "'");
  CharacterLabel label;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto r1 = std::from_chars(begin, begin + colon, label.modulus);
  auto r2 = std::from_chars(begin + colon + 1, end, label.index);
  require(r1.ec == std::errc{} && r1.ptr == begin + colon && r2.ec == std::errc{} && r2.ptr == end,
          "malformed character label '" + text + "'");
  require(label.modulus >= 1, "character modulus must be >= 1");
  return label;
}

// ---------------------------------------------------------------------------
// DirichletGroup

DirichletGroup::DirichletGroup(std::uint64_t q) : q_(q) {
  require(q >= 1, "invalid modulus 0");
  require(q <= 1'000'000, "modulus above supported range 1e6");
  for (const auto& [p, e] : factorize(q)) {
    Component comp{};
    comp.prime = p;
    comp.power = e;
    comp.prime_power = 1;
    for (int i = 0; i < e; ++i) comp.prime_power *= p;
    comp.first_gen = gens_.size();
    const std::uint64_t pe = comp.prime_power;
    std::vector<std::uint64_t> local_orders;
    if (p == 2 && e == 1) {
      // trivial factor
    } else if (p == 2 && e == 2) {
      comp.local_gens = {3};
      local_orders = {2};
      comp.logs.assign(pe, kNoLog);
      comp.logs[1] = 0;
      comp.logs[3] = 1;
    } else if (p == 2) {
      comp.local_gens = {pe - 1, 5};
      local_orders = {2, pe / 4};
      comp.logs.assign(pe * 2, kNoLog);
      std::uint64_t five = 1;
      for (std::uint64_t b = 0; b < pe / 4; ++b) {
        for (std::uint64_t a = 0; a < 2; ++a) {
          const std::uint64_t val = a == 0 ? five : pe - five;
          comp.logs[val * 2] = static_cast<std::uint32_t>(a);
          comp.logs[val * 2 + 1] = static_cast<std::uint32_t>(b);
        }
        five = five * 5 % pe;
      }
    } else {
      const std::uint64_t g = smallest_primitive_root(p, pe);
      const std::uint64_t order = pe / p * (p - 1);
      comp.local_gens = {g};
      local_orders = {order};
      comp.logs.assign(pe, kNoLog);
      std::uint64_t x = 1;
      for (std::uint64_t k = 0; k < order; ++k) {
        comp.logs[x] = static_cast<std::uint32_t>(k);
        x = x * g % pe;
      }
    }
    comp.gen_count = comp.local_gens.size();
    const std::uint64_t cofactor = q / pe;
    const std::uint64_t lift = cofactor == 1 ? 0 : inv_mod(cofactor % pe, pe);
    for (std::size_t j = 0; j < comp.local_gens.size(); ++j) {
      // x = g mod p^e, x = 1 mod q/p^e
      const std::uint64_t g = comp.local_gens[j];
      const std::uint64_t global =
          cofactor == 1 ? g % q : (1 + mul_mod(mul_mod((g + pe - 1) % pe, lift, pe), cofactor, q)) % q;
      gens_.push_back(global);
      orders_.push_back(local_orders[j]);
      exponent_ = lcm_u64(exponent_, local_orders[j]);
    }
    phi_ *= pe / p * (p - 1);
    comps_.push_back(std::move(comp));
  }
}

bool DirichletGroup::is_unit(std::int64_t n) const {
  return gcd_u64(reduce_mod(n, q_), q_) == 1;
}

std::vector<std::uint64_t> DirichletGroup::discrete_log(std::int64_t n) const {
  require(is_unit(n), "discrete log of a non-unit");
  const std::uint64_t r = reduce_mod(n, q_);
  std::vector<std::uint64_t> out(gens_.size(), 0);
  for (const auto& comp : comps_) {
    const std::uint64_t rr = r % comp.prime_power;
    for (std::size_t j = 0; j < comp.gen_count; ++j)
      out[comp.first_gen + j] = comp.logs[rr * comp.gen_count + j];
  }
  return out;
}

std::uint64_t DirichletGroup::element(std::span<const std::uint64_t> exponents) const {
  std::uint64_t x = 1 % q_;
  for (std::size_t j = 0; j < gens_.size(); ++j) x = mul_mod(x, pow_mod(gens_[j], exponents[j], q_), q_);
  return q_ == 1 ? 1 : x;
}

std::shared_ptr<const DirichletGroup> dirichlet_group(std::uint64_t q) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const DirichletGroup>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[q];
  if (!slot) slot = std::make_shared<const DirichletGroup>(q);
  return slot;
}

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                                       std::vector<std::uint64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  require(group_ != nullptr, "character needs a group");
  const auto orders = group_->orders();
  require(exponents_.size() == orders.size(), "exponent vector has wrong length");
  order_ = 1;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    require(exponents_[j] < orders[j], "exponent out of range");
    order_ = lcm_u64(order_, orders[j] / gcd_u64(exponents_[j], orders[j]));
  }
  label_ = {group_->modulus(), group_->element(exponents_)};
  const CharValue at_minus_one = (*this)(-1);
  parity_ = (at_minus_one && at_minus_one->numerator() == 0) ? 0 : 1;
  conductor_ = compute_conductor();
}

DirichletCharacter DirichletCharacter::from_label(const CharacterLabel& label) {
  require(label.modulus >= 1, "invalid modulus 0");
  require(label.index >= 1 && label.index <= label.modulus && gcd_u64(label.index, label.modulus) == 1,
          "character index " + std::to_string(label.index) + " is not a unit mod " +
              std::to_string(label.modulus));
  auto group = dirichlet_group(label.modulus);
  auto exps = group->discrete_log(static_cast<std::int64_t>(label.index));
  return DirichletCharacter(std::move(group), std::move(exps));
}

DirichletCharacter DirichletCharacter::principal(std::uint64_t q) {
  auto group = dirichlet_group(q);
  std::vector<std::uint64_t> zeros(group->rank(), 0);
  return DirichletCharacter(std::move(group), std::move(zeros));
}

UnitRoot DirichletCharacter::angle_on_component(std::size_t comp_idx, std::uint64_t residue) const {
  const auto& comp = group_->components()[comp_idx];
  const auto orders = group_->orders();
  const auto m = static_cast<std::int64_t>(group_->exponent());
  std::int64_t num = 0;
  for (std::size_t j = 0; j < comp.gen_count; ++j) {
    const std::size_t g = comp.first_gen + j;
    const std::uint64_t log = comp.logs[residue * comp.gen_count + j];
    const std::uint64_t term = mul_mod(exponents_[g] * (group_->exponent() / orders[g]), log,
                                       group_->exponent());
    num = (num + static_cast<std::int64_t>(term)) % m;
  }
  return UnitRoot::from_angle(num, m);
}

CharValue DirichletCharacter::operator()(std::int64_t n) const {
  const std::uint64_t q = group_->modulus();
  const std::uint64_t r = reduce_mod(n, q);
  if (gcd_u64(r, q) != 1) return std::nullopt;
  UnitRoot acc;
  for (std::size_t c = 0; c < group_->components().size(); ++c) {
    const auto& comp = group_->components()[c];
    if (comp.gen_count == 0) continue;
    acc = acc * angle_on_component(c, r % comp.prime_power);
  }
  return acc;
}

std::complex<double> DirichletCharacter::value(std::int64_t n) const {
  const CharValue v = (*this)(n);
  return v ? v->value() : std::complex<double>{0.0, 0.0};
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<std::uint64_t> exps(exponents_.size());
  const auto orders = group_->orders();
  for (std::size_t j = 0; j < exps.size(); ++j) exps[j] = (orders[j] - exponents_[j]) % orders[j];
  return DirichletCharacter(group_, std::move(exps));
}

std::uint64_t DirichletCharacter::compute_conductor() const {
  std::uint64_t conductor = 1;
  const auto comps = group_->components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.gen_count == 0) continue;
    // smallest p^k such that the local character is trivial on 1 + p^k Z
    std::uint64_t pk = 1;
    for (int k = 0; k <= comp.power; ++k) {
      bool trivial = true;
      for (std::uint64_t r = 1; r < comp.prime_power && trivial; r += pk) {
        if (r % comp.prime == 0) continue;
        trivial = angle_on_component(c, r).numerator() == 0;
      }
      if (trivial) break;
      pk *= comp.prime;
    }
    conductor *= pk;
  }
  return conductor;
}

// ---------------------------------------------------------------------------
// operations

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q) {
  require(q >= 1, "invalid modulus 0");
  auto group = dirichlet_group(q);
  const auto orders = group->orders();
  std::vector<DirichletCharacter> out;
  out.reserve(group->phi());
  std::vector<std::uint64_t> exps(orders.size(), 0);
  for (;;) {
    out.emplace_back(group, exps);
    std::size_t j = 0;
    for (; j < exps.size(); ++j) {
      if (++exps[j] < orders[j]) break;
      exps[j] = 0;
    }
    if (j == exps.size()) break;
  }
  std::sort(out.begin(), out.end(), [](const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.label().index < b.label().index;
  });
  return out;
}

CharValue eval_character(const DirichletCharacter& chi, std::int64_t n) { return chi(n); }

std::pair<std::uint64_t, DirichletCharacter> conductor_and_inducer(const DirichletCharacter& chi) {
  const std::uint64_t qstar = chi.conductor();
  auto group = dirichlet_group(qstar);
  const auto orders = group->orders();
  std::vector<std::uint64_t> exps(orders.size(), 0);
  const auto src = chi.group().components();
  for (const auto& comp : group->components()) {
    const auto it = std::find_if(src.begin(), src.end(),
                                 [&](const auto& s) { return s.prime == comp.prime; });
    const auto src_idx = static_cast<std::size_t>(it - src.begin());
    for (std::size_t j = 0; j < comp.gen_count; ++j) {
      const std::size_t g = comp.first_gen + j;
      // any lift of the local generator works: chi is trivial on 1 mod p^k
      const UnitRoot u =
          it->gen_count == 0 ? UnitRoot{} : chi.angle_on_component(src_idx, comp.local_gens[j]);
      require(orders[g] % static_cast<std::uint64_t>(u.denominator()) == 0,
              "character does not factor through its conductor", Errc::invariant);
      exps[g] = static_cast<std::uint64_t>(u.numerator()) * (orders[g] / static_cast<std::uint64_t>(u.denominator()));
    }
  }
  DirichletCharacter star(std::move(group), std::move(exps));
  return {qstar, std::move(star)};
}

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t a = 1; a <= q; ++a) {
    const CharValue v = chi(static_cast<std::int64_t>(a));
    if (!v) continue;
    acc += (*v * UnitRoot::from_angle(static_cast<std::int64_t>(a % q), static_cast<std::int64_t>(q))).value();
  }
  return acc;
}

OrthogonalityTable orthogonality_matrix(std::uint64_t q) {
  require(q >= 1, "invalid modulus 0");
  const auto chars = enumerate_characters(q);
  const auto m = static_cast<std::int64_t>(dirichlet_group(q)->exponent());
  std::vector<CyclotomicInt> entries(q * q, CyclotomicInt(m));
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      auto& cell = entries[a * q + b];
      for (const auto& chi : chars) {
        const CharValue va = chi(static_cast<std::int64_t>(a));
        const CharValue vb = chi(static_cast<std::int64_t>(b));
        if (va && vb) cell.add(va->conj() * *vb);
      }
    }
  }
  return OrthogonalityTable(q, std::move(entries));
}

}  // namespace dpc
