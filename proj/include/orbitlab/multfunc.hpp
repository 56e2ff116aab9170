#pragma once

// Completely multiplicative functions N -> T, described by a finite
// prime-exception table over a base rule (constant / Dirichlet character /
// pseudocharacter / seeded random phases / product) plus an Archimedean
// twist n^{it}.  Values are Angles; a function is determined by its values
// at primes and f(1) = 1.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "orbitlab/arith.hpp"
#include "orbitlab/torus.hpp"

namespace orbitlab {

inline constexpr std::int64_t kCharacterModulusCap = 10'000;

namespace detail {

// Unit group (Z/q)* split into cyclic factors via CRT on the prime-power
// parts of q; discrete logs by exhaustive tabulation (q is capped, so
// generator theory is not worth the complexity).
struct CyclicFactor {
  std::int64_t modulus;              // p^e
  std::int64_t order;                // size of this cyclic factor
  std::vector<std::int32_t> dlog;    // dlog[a mod p^e], -1 if not coprime
};

struct UnitGroup {
  std::int64_t q;
  std::vector<CyclicFactor> factors;

  explicit UnitGroup(std::int64_t q_in) : q(q_in) {
    std::int64_t m = q;
    for (std::int64_t p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      std::int64_t pk = 1;
      while (m % p == 0) { m /= p; pk *= p; }
      add_prime_power(p, pk);
    }
    if (m > 1) add_prime_power(m, m);
  }

  void add_prime_power(std::int64_t p, std::int64_t pk) {
    if (p == 2) {
      if (pk == 2) return;  // (Z/2)* trivial
      if (pk == 4) {
        factors.push_back(make_factor(pk, 3, 2));
        return;
      }
      // (Z/2^e)* = <-1> x <3>, orders 2 and 2^{e-2}
      factors.push_back(make_factor(pk, pk - 1, 2));
      factors.push_back(make_factor(pk, 3, pk / 4));
      return;
    }
    std::int64_t ord = pk - pk / p;  // phi(p^e)
    std::int64_t g = find_generator(p, pk, ord);
    factors.push_back(make_factor(pk, g, ord));
  }

  static CyclicFactor make_factor(std::int64_t pk, std::int64_t g,
                                  std::int64_t order) {
    CyclicFactor f;
    f.modulus = pk;
    f.order = order;
    f.dlog.assign(static_cast<std::size_t>(pk), -1);
    std::int64_t v = 1;
    for (std::int64_t j = 0; j < order; ++j) {
      f.dlog[v] = static_cast<std::int32_t>(j);
      v = (v * g) % pk;
    }
    return f;
  }

  static std::int64_t find_generator(std::int64_t p, std::int64_t pk,
                                     std::int64_t ord) {
    // brute-force search for an element of full order
    for (std::int64_t g = 2; g < pk; ++g) {
      if (g % p == 0) continue;
      std::int64_t v = 1;
      bool full = true;
      // order divides ord; check no proper divisor works by direct power walk
      for (std::int64_t j = 1; j < ord; ++j) {
        v = (v * g) % pk;
        if (v == 1) { full = false; break; }
      }
      if (full) return g;
    }
    throw std::logic_error("unit group generator search failed");
  }

  // Index decomposition of a residue; component j in the 2^e case covers
  // both of its factors (they share the modulus).  For -1 x <3> we need the
  // joint log: a = (-1)^s 3^t; recover s,t by testing both signs.
  [[nodiscard]] bool decompose(std::int64_t a,
                               std::vector<std::int64_t>& idx) const {
    idx.assign(factors.size(), 0);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = factors[i];
      std::int64_t r = a % f.modulus;
      if (f.modulus % 2 == 0 && f.modulus >= 8) {
        // paired factors for 2^e: handled when we meet the first of the two
        const bool is_sign_factor = (f.dlog[f.modulus - 1] == 1);
        if (is_sign_factor) {
          const auto& f2 = factors[i + 1];
          std::int32_t t = f2.dlog[r];
          if (t >= 0) {
            idx[i] = 0;
            idx[i + 1] = t;
          } else {
            t = f2.dlog[(f.modulus - r) % f.modulus];
            if (t < 0) return false;
            idx[i] = 1;
            idx[i + 1] = t;
          }
          ++i;  // consumed the partner factor
          continue;
        }
      }
      if (r < 0 || f.dlog[r] < 0) return false;
      idx[i] = f.dlog[r];
    }
    return true;
  }
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// A Dirichlet character mod q, identified by its exponent vector on the
/// cyclic factors of (Z/q)*.  Value at a coprime residue is the exact
/// rational angle sum_j exps[j]*dlog_j(a)/order_j.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const detail::UnitGroup> group,
                     std::vector<std::int64_t> exps)
      : group_(std::move(group)), exps_(std::move(exps)) {
    order_ = 1;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      std::int64_t d = group_->factors[i].order;
      std::int64_t g = std::gcd(exps_[i], d);
      order_ = std::lcm(order_, d / g);
    }
    conductor_ = compute_conductor();
  }

  [[nodiscard]] std::int64_t modulus() const { return group_->q; }
  [[nodiscard]] std::int64_t order() const { return order_; }
  [[nodiscard]] std::int64_t conductor() const { return conductor_; }
  [[nodiscard]] bool is_primitive() const { return conductor_ == group_->q; }
  [[nodiscard]] bool is_principal() const { return order_ == 1; }
  [[nodiscard]] const std::vector<std::int64_t>& exponents() const { return exps_; }

  /// Angle of chi(a); nullopt when gcd(a, q) > 1 (chi vanishes there).
  [[nodiscard]] std::optional<Angle> angle_at(std::int64_t a) const {
    a %= modulus();
    if (a < 0) a += modulus();
    if (modulus() == 1) return Angle::zero();
    std::vector<std::int64_t> idx;
    if (!group_->decompose(a, idx)) return std::nullopt;
    Angle acc = Angle::zero();
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      const auto& f = group_->factors[i];
      acc = acc + Angle::rational(exps_[i] * idx[i], f.order);
    }
    return acc;
  }

 private:
  [[nodiscard]] std::int64_t compute_conductor() const {
    std::int64_t q = modulus();
    for (std::int64_t d = 1; d <= q; ++d) {
      if (q % d) continue;
      bool trivial_on_kernel = true;
      for (std::int64_t a = 1; a <= q && trivial_on_kernel; a += d) {
        if (std::gcd(a, q) != 1) continue;
        auto v = angle_at(a);
        if (!v || !v->is_zero()) trivial_on_kernel = false;
      }
      if (trivial_on_kernel) return d;
    }
    return q;
  }

  std::shared_ptr<const detail::UnitGroup> group_;
  std::vector<std::int64_t> exps_;
  std::int64_t order_;
  std::int64_t conductor_;
};

/// All phi(q) Dirichlet characters mod q in a canonical deterministic order:
/// sorted by (order, exponent vector); the principal character comes first.
inline std::vector<DirichletCharacter> character_table(std::int64_t q) {
  if (q < 1 || q > kCharacterModulusCap)
    throw std::invalid_argument("character_table: q out of [1, 10^4]");
  auto group = std::make_shared<const detail::UnitGroup>(q);
  std::vector<std::vector<std::int64_t>> expsets;
  std::vector<std::int64_t> cur(group->factors.size(), 0);
  std::int64_t total = 1;
  for (const auto& f : group->factors) total *= f.order;
  expsets.reserve(total);
  for (std::int64_t t = 0; t < total; ++t) {
    std::int64_t rest = t;
    for (std::size_t i = 0; i < group->factors.size(); ++i) {
      cur[i] = rest % group->factors[i].order;
      rest /= group->factors[i].order;
    }
    expsets.push_back(cur);
  }
  std::vector<DirichletCharacter> chars;
  chars.reserve(expsets.size());
  for (auto& e : expsets) chars.emplace_back(group, std::move(e));
  std::sort(chars.begin(), chars.end(),
            [](const DirichletCharacter& a, const DirichletCharacter& b) {
              if (a.order() != b.order()) return a.order() < b.order();
              return a.exponents() < b.exponents();
            });
  return chars;
}

/// Canonical index of a character within character_table(modulus()).
inline std::int64_t character_index(const DirichletCharacter& chi) {
  auto table = character_table(chi.modulus());
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].exponents() == chi.exponents())
      return static_cast<std::int64_t>(i);
  throw std::logic_error("character_index: character not in its own table");
}

/// Pseudocharacter: the canonical-branch completely multiplicative k-th
/// root of the extension chi~ (chi~(p) = chi(p) off the conductor, 1 on it).
/// At p not dividing q the prime angle is (representative of chi(p) in
/// [0,1)) / k, so k*h(p) = chi~(p) exactly and all values lie in mu_{k*r}.
struct Pseudocharacter {
  DirichletCharacter chi;
  std::int64_t k;

  [[nodiscard]] Angle angle_at_prime(std::int64_t p) const {
    if (chi.modulus() % p == 0 || chi.modulus() == 1) return Angle::zero();
    auto a = chi.angle_at(p % chi.modulus());
    if (!a) return Angle::zero();  // p | q handled above; unreachable
    return Angle::rational(a->num, a->den * k);
  }
};

inline Pseudocharacter make_pseudocharacter(const DirichletCharacter& chi,
                                            std::int64_t k) {
  if (k < 1) throw std::invalid_argument("make_pseudocharacter: k must be >= 1");
  return Pseudocharacter{chi, k};
}

// ---------------------------------------------------------------------------
// Base rules and function specs
// ---------------------------------------------------------------------------

struct BaseRule;

struct ConstantRule {
  Angle angle;  // same value at every prime
};

struct DirichletRule {
  DirichletCharacter chi;  // extended: angle 0 at p | q
};

struct PseudocharacterRule {
  Pseudocharacter h;
};

/// Seeded uniform prime phases: angle(p) = u64 hash(seed, p) mapped to
/// [0,1).  A pure function of (seed, p), so evaluation order is irrelevant
/// and reports quoting the seed are reproducible bit-for-bit.
struct RandomPhaseRule {
  std::uint64_t seed;

  [[nodiscard]] Angle angle_at_prime(std::int64_t p) const {
    std::uint64_t h = detail::splitmix64(detail::splitmix64(seed) ^
                                         static_cast<std::uint64_t>(p));
    return Angle::real_angle(static_cast<double>(h >> 11) * 0x1.0p-53);
  }
};

struct ProductRule {
  std::vector<BaseRule> factors;  // angles add
};

struct BaseRule {
  std::variant<ConstantRule, DirichletRule, PseudocharacterRule,
               RandomPhaseRule, ProductRule>
      rule = ConstantRule{Angle::zero()};

  [[nodiscard]] Angle angle_at_prime(std::int64_t p) const;
  [[nodiscard]] bool rational_valued() const;
};

inline Angle BaseRule::angle_at_prime(std::int64_t p) const {
  struct Visitor {
    std::int64_t p;
    Angle operator()(const ConstantRule& r) const { return r.angle; }
    Angle operator()(const DirichletRule& r) const {
      if (r.chi.modulus() % p == 0 || r.chi.modulus() == 1) return Angle::zero();
      auto a = r.chi.angle_at(p % r.chi.modulus());
      return a ? *a : Angle::zero();
    }
    Angle operator()(const PseudocharacterRule& r) const {
      return r.h.angle_at_prime(p);
    }
    Angle operator()(const RandomPhaseRule& r) const {
      return r.angle_at_prime(p);
    }
    Angle operator()(const ProductRule& r) const {
      Angle acc = Angle::zero();
      for (const auto& f : r.factors) acc = acc + f.angle_at_prime(p);
      return acc;
    }
  };
  return std::visit(Visitor{p}, rule);
}

inline bool BaseRule::rational_valued() const {
  struct Visitor {
    bool operator()(const ConstantRule& r) const { return r.angle.is_rational(); }
    bool operator()(const DirichletRule&) const { return true; }
    bool operator()(const PseudocharacterRule&) const { return true; }
    bool operator()(const RandomPhaseRule&) const { return false; }
    bool operator()(const ProductRule& r) const {
      for (const auto& f : r.factors)
        if (!f.rational_valued()) return false;
      return true;
    }
  };
  return std::visit(Visitor{}, rule);
}

/// A completely multiplicative function N -> T: finite prime exceptions
/// over a base rule, times the Archimedean twist n^{i twist_t}.
struct MultFnSpec {
  std::map<std::int64_t, Angle> exceptions;
  BaseRule base;
  double twist_t = 0.0;

  [[nodiscard]] Angle prime_angle(std::int64_t p) const {
    auto it = exceptions.find(p);
    if (it != exceptions.end()) return it->second;
    return base.angle_at_prime(p);
  }

  /// Exactly rational at every prime (twist off, no real-valued pieces)?
  [[nodiscard]] bool rational_valued() const {
    if (twist_t != 0.0) return false;
    if (!base.rational_valued()) return false;
    for (const auto& [p, a] : exceptions)
      if (!a.is_rational()) return false;
    return true;
  }
};

/// Angle of f(n) = sum over p^e || n of e*angle(p), plus the twist
/// t*log(n)/(2*pi).  eval(fn, table, 1) = 0.
inline Angle eval(const MultFnSpec& fn, const SpfTable& table, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("eval: n must be >= 1");
  if (n == 1) return Angle::zero();
  Angle acc = Angle::zero();
  if (n <= table.limit()) {
    std::int64_t m = n;
    while (m > 1) {
      std::int64_t p = table.p_minus(m);
      int e = 0;
      while (m % p == 0) { m /= p; ++e; }
      acc = acc + fn.prime_angle(p).scaled(e);
    }
  } else {
    auto f = table.factorize_extended(n);
    for (auto [p, e] : f.pairs) acc = acc + fn.prime_angle(p).scaled(e);
  }
  if (fn.twist_t != 0.0) acc = acc + archimedean_angle(n, fn.twist_t);
  return acc;
}

/// T_{fn^m} up to `bound`: primes p <= bound with m*angle(p) != 0 - exact
/// for rational angles, tolerance 1e-12 from 0 for real ones.
inline std::vector<std::int64_t> support_set(const MultFnSpec& fn,
                                             std::int64_t m,
                                             std::int64_t bound,
                                             const SpfTable& table) {
  if (m < 1) throw std::invalid_argument("support_set: m must be >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t p : table.primes()) {
    if (p > bound) break;
    Angle a = eval(fn, table, p).scaled(m);
    if (a.is_rational() ? !a.is_zero()
                        : circ_dist(a, Angle::zero()) > 1e-12)
      out.push_back(p);
  }
  return out;
}

/// Does fn^k equal 1 at every prime in (N0, bound]?  Certifies eventual
/// rationality only up to `bound`; exact equality, so real-valued angles
/// (Archimedean twists, random phases) report false.
inline bool eventually_rational_test(const MultFnSpec& fn, std::int64_t k,
                                     std::int64_t N0, std::int64_t bound,
                                     const SpfTable& table) {
  if (k < 1) throw std::invalid_argument("eventually_rational_test: k >= 1");
  if (N0 > bound)
    throw std::invalid_argument("eventually_rational_test: N0 <= bound");
  for (std::int64_t p : table.primes()) {
    if (p <= N0) continue;
    if (p > bound) break;
    Angle a = eval(fn, table, p).scaled(k);
    if (a.is_rational() ? !a.is_zero() : a.value() != 0.0) return false;
  }
  return true;
}

/// Structural verification of the relation f^k = g^l together with
/// f^k = n^{ikt} (no search; reports deviations over p <= bound).
struct EkcReport {
  bool power_relation_holds = true;   // k*f(p) == l*g(p) within 1e-9
  double max_power_deviation = 0.0;
  std::int64_t first_power_failure = 0;  // 0 when none
  bool archimedean_match = true;      // k*f(p) == angle of p^{i k t}
  double max_archimedean_deviation = 0.0;
};

inline EkcReport ekc_structural_check(const MultFnSpec& f, const MultFnSpec& g,
                                      std::int64_t k, std::int64_t l,
                                      std::int64_t bound,
                                      const SpfTable& table) {
  if (k < 1 || l < 1)
    throw std::invalid_argument("ekc_structural_check: k, l must be >= 1");
  EkcReport rep;
  const double kt = static_cast<double>(k) * f.twist_t;
  for (std::int64_t p : table.primes()) {
    if (p > bound) break;
    Angle fk = eval(f, table, p).scaled(k);
    Angle gl = eval(g, table, p).scaled(l);
    double d = circ_dist(fk, gl);
    if (d > rep.max_power_deviation) rep.max_power_deviation = d;
    if (d > 1e-9 && rep.first_power_failure == 0) rep.first_power_failure = p;
    double da = circ_dist(fk, archimedean_angle(p, kt));
    if (da > rep.max_archimedean_deviation) rep.max_archimedean_deviation = da;
  }
  rep.power_relation_holds = rep.max_power_deviation <= 1e-9;
  rep.archimedean_match = rep.max_archimedean_deviation <= 1e-9;
  return rep;
}

}  // namespace orbitlab
