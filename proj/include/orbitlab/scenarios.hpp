#pragma once

// Constructions and end-to-end experiments: the two counterexample families
// for the pair-orbit density conjecture, the rational/irrational twist-ratio
// families with their powered near-diagonal orbits, Kronecker approximation
// searches, and the orbit scan feeding discrepancy and coverage.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orbitlab/arith.hpp"
#include "orbitlab/discrepancy.hpp"
#include "orbitlab/multfunc.hpp"
#include "orbitlab/torus.hpp"

namespace orbitlab {

// Default irrational angles: quadratic irrationals with tame continued
// fractions, so Kronecker searches stay fast and reproducible.
inline double quad_irrational_sqrt2() { return std::sqrt(2.0) - 1.0; }
inline double quad_irrational_sqrt3() { return std::sqrt(3.0) - 1.0; }
inline double quad_irrational_golden() { return (std::sqrt(5.0) - 1.0) / 2.0; }

/// First character of exact order `ord` in canonical table order, searching
/// moduli q >= q_min upward.  Deterministic.
inline DirichletCharacter pick_character_of_order(std::int64_t ord,
                                                  std::int64_t q_min = 3) {
  for (std::int64_t q = q_min; q <= kCharacterModulusCap; ++q) {
    for (const auto& chi : character_table(q))
      if (chi.order() == ord) return chi;
  }
  throw std::invalid_argument("pick_character_of_order: none below modulus cap");
}

/// Family (i): f = h1 * n^{it}, g = h2 * n^{it} with h1, h2 extended
/// characters of exact orders k, l >= 2 (distinct moduli) and t != 0.
/// Then f^k = n^{ikt} identically while the orbit pair is confined near
/// finitely many diagonal translates.
inline std::pair<MultFnSpec, MultFnSpec> counterexample_i(std::int64_t order_k,
                                                          std::int64_t order_l,
                                                          double t) {
  if (order_k < 2 || order_l < 2)
    throw std::invalid_argument("counterexample_i: orders must be >= 2");
  if (t == 0.0) throw std::invalid_argument("counterexample_i: t must be != 0");
  DirichletCharacter chi1 = pick_character_of_order(order_k);
  DirichletCharacter chi2 = pick_character_of_order(order_l, chi1.modulus() + 1);
  MultFnSpec f, g;
  f.base.rule = PseudocharacterRule{make_pseudocharacter(chi1, 1)};
  f.twist_t = t;
  g.base.rule = PseudocharacterRule{make_pseudocharacter(chi2, 1)};
  g.twist_t = t;
  return {f, g};
}

/// Family (ii): f and g equal to 1 at every prime except p, where they take
/// distinct irrational angles.  Since p cannot divide both n and n+1, the
/// orbit lies on the cross (T x {1}) u ({1} x T) u ({1} x {1}).
inline std::pair<MultFnSpec, MultFnSpec> counterexample_ii(std::int64_t p,
                                                           Angle alpha,
                                                           Angle beta) {
  if (alpha.is_rational() || beta.is_rational())
    throw std::invalid_argument(
        "counterexample_ii: alpha, beta must be irrational-marked real angles");
  MultFnSpec f, g;
  f.exceptions[p] = alpha;
  g.exceptions[p] = beta;
  return {f, g};
}

/// Rational twist-ratio family: f^k = n^{it}, g^l = n^{it'} with
/// t = (r1/s1) t'.  The powered orbit (f(n)^{k s1}, g(n+1)^{l r1}) =
/// (n^{i s1 t}, (n+1)^{i r1 t'}) collapses onto the diagonal of T^2 up to
/// the telescoping error |u| log(1 + 1/n), u = s1 t = r1 t'.
struct RatRatioFamily {
  MultFnSpec f;
  MultFnSpec g;
  std::int64_t exp_f = 1;  // k * s1
  std::int64_t exp_g = 1;  // l * r1
  double t = 0.0;
  double t_prime = 0.0;
  double u = 0.0;          // s1 * t
};

inline RatRatioFamily ratratio_family(std::int64_t k, std::int64_t l,
                                      std::int64_t r1, std::int64_t s1,
                                      double t_prime) {
  if (k < 1 || l < 1)
    throw std::invalid_argument("ratratio_family: k, l must be >= 1");
  if (r1 == 0 || s1 == 0)
    throw std::invalid_argument("ratratio_family: r1, s1 must be nonzero");
  if (t_prime == 0.0)
    throw std::invalid_argument("ratratio_family: t' must be != 0");
  RatRatioFamily fam;
  fam.t_prime = t_prime;
  fam.t = (static_cast<double>(r1) / static_cast<double>(s1)) * t_prime;
  fam.u = static_cast<double>(s1) * fam.t;
  fam.exp_f = k * s1;
  fam.exp_g = l * r1;
  fam.f.twist_t = fam.t / static_cast<double>(k);
  if (k >= 2)
    fam.f.base.rule = PseudocharacterRule{
        make_pseudocharacter(pick_character_of_order(k), 1)};
  fam.g.twist_t = t_prime / static_cast<double>(l);
  if (l >= 2)
    fam.g.base.rule = PseudocharacterRule{
        make_pseudocharacter(pick_character_of_order(l, 5), 1)};
  return fam;
}

// ---------------------------------------------------------------------------
// Kronecker-type searches
// ---------------------------------------------------------------------------

struct KroneckerQuery {
  std::vector<double> alphas;   // 1 or 2 real angles
  std::vector<Angle> targets;   // matching targets
  double eta = 0.01;            // strict circular-distance tolerance
  std::int64_t M = 1000;        // search bound on m
  std::int64_t k = 1;           // divisibility: require k | m

  void validate() const {
    if (alphas.empty() || alphas.size() > 2 ||
        alphas.size() != targets.size())
      throw std::invalid_argument("KroneckerQuery: need 1 or 2 (alpha, target)");
    if (!(eta > 0.0)) throw std::invalid_argument("KroneckerQuery: eta > 0");
    if (M < 1 || k < 1) throw std::invalid_argument("KroneckerQuery: M, k >= 1");
  }
};

namespace detail {

inline double circ_dist_raw(double x, double y) {
  double d = std::fabs(frac_unit(x) - frac_unit(y));
  return d > 0.5 ? 1.0 - d : d;
}

inline bool kronecker_hit(const KroneckerQuery& q, std::int64_t m) {
  for (std::size_t j = 0; j < q.alphas.size(); ++j) {
    if (circ_dist_raw(static_cast<double>(m) * q.alphas[j],
                      q.targets[j].value()) >= q.eta)
      return false;
  }
  return true;
}

// Candidate generation for the single-alpha accelerated mode: with beta =
// k*alpha and q a best-approximation denominator (||q beta|| = eps small),
// every j <= M/k splits as j = u + v*q, and for fixed u the positions drift
// linearly by ~eps, so the admissible v lie in short intervals solvable in
// O(1).  Candidates are over-collected with slack and re-checked with the
// exact brute-force predicate, so the two modes agree bit-for-bit.
inline std::optional<std::int64_t> kronecker_cf_single(
    const KroneckerQuery& q) {
  const double beta = frac_unit(static_cast<double>(q.k) * q.alphas[0]);
  const double gamma = q.targets[0].value();
  const std::int64_t J = q.M / q.k;
  if (J < 1) return std::nullopt;

  // best approximation denominator via continued fractions of beta
  std::int64_t qden = 0;
  {
    double x = beta;
    std::int64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents
    for (int it = 0; it < 64; ++it) {
      if (x < 1e-15) break;
      double inv = 1.0 / x;
      std::int64_t a = static_cast<std::int64_t>(std::floor(inv));
      if (a < 1) break;
      std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
      if (q2 > J || q2 <= 0) break;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      double err = std::fabs(q1 * beta - p1);
      qden = q1;
      if (err < q.eta / 4.0) break;
      x = inv - static_cast<double>(a);
    }
  }
  if (qden < 2) return std::nullopt;  // nothing to accelerate

  const double eps = static_cast<double>(qden) * beta -
                     std::round(static_cast<double>(qden) * beta);
  const double slack = 1e-7 + q.eta * 1e-6;
  std::int64_t best = -1;
  for (std::int64_t u = 0; u <= std::min(qden - 1, J); ++u) {
    // positions: c_u + v*eps (mod 1) for v = 0..vmax
    double cu = frac_unit(static_cast<double>(u) * beta - gamma);
    if (cu > 0.5) cu -= 1.0;  // representative in (-1/2, 1/2]
    std::int64_t vmax = (J - u) / qden;
    if (u == 0) {
      if (vmax < 1) continue;  // j = 0 excluded
    }
    auto consider = [&](std::int64_t v) {
      if (v < 0 || v > vmax) return;
      std::int64_t j = u + v * qden;
      if (j < 1 || j > J) return;
      std::int64_t m = j * q.k;
      if (kronecker_hit(q, m) && (best < 0 || m < best)) best = m;
    };
    if (std::fabs(eps) < 1e-18) {
      if (std::fabs(cu) < q.eta + slack) consider(u == 0 ? 1 : 0);
      continue;
    }
    double drift_span = std::fabs(eps) * static_cast<double>(vmax);
    std::int64_t z_lo = static_cast<std::int64_t>(
        std::floor(std::min(cu, cu + (eps > 0 ? drift_span : -drift_span)) -
                   q.eta - slack));
    std::int64_t z_hi = static_cast<std::int64_t>(
        std::ceil(std::max(cu, cu + (eps > 0 ? drift_span : -drift_span)) +
                  q.eta + slack));
    for (std::int64_t z = z_lo; z <= z_hi; ++z) {
      double lo = (static_cast<double>(z) - q.eta - slack - cu) / eps;
      double hi = (static_cast<double>(z) + q.eta + slack - cu) / eps;
      if (lo > hi) std::swap(lo, hi);
      std::int64_t v0 = static_cast<std::int64_t>(std::floor(lo));
      std::int64_t v1 = static_cast<std::int64_t>(std::ceil(hi));
      for (std::int64_t v = v0; v <= v1; ++v) consider(v);
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

}  // namespace detail

/// Least m <= M with k | m and ||m alpha_j - target_j|| < eta for every
/// configured pair, or nullopt.  Brute force by default; the
/// continued-fraction accelerated mode (single alpha only) over-collects
/// lattice candidates and re-checks them with the same predicate, so both
/// modes agree exactly wherever both apply.
inline std::optional<std::int64_t> kronecker_search(const KroneckerQuery& q,
                                                    bool accelerated = false) {
  q.validate();
  if (accelerated && q.alphas.size() == 1) {
    if (auto fast = detail::kronecker_cf_single(q)) {
      // the lattice walk can only miss hits below its candidate floor when
      // qden < 2; verify minimality by brute force over the short prefix
      for (std::int64_t m = q.k; m < *fast; m += q.k)
        if (detail::kronecker_hit(q, m)) return m;
      return fast;
    }
    // fall through to brute force when no convergent helps
  }
  for (std::int64_t m = q.k; m <= q.M; m += q.k)
    if (detail::kronecker_hit(q, m)) return m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Prime-power hitting search (the engine behind the irrational-case lemma)
// ---------------------------------------------------------------------------

struct PPowerResult {
  std::int64_t n = 0;  // prime with P^-(n) > N
  std::int64_t m = 0;  // multiple of k
};

/// Search primes p in (N, prime_bound] and m <= M with k | m for
///   (i)  |f(p)^m - z| < eta        (chord distance),
///   (ii) p^{ium} in I, the symmetric arc of half-length delta about 1,
///   (iii) k | m;
/// first hit in (p, m) lexicographic order.  Functions violating the
/// lemma's irrationality hypotheses may legitimately yield not-found
/// within the bounds.
inline std::optional<PPowerResult> ppower_search(
    const MultFnSpec& f, Angle z, double u, double delta, double eta,
    std::int64_t k, std::int64_t N, std::int64_t prime_bound, std::int64_t M,
    const SpfTable& table) {
  if (!(delta > 0.0) || !(eta > 0.0) || k < 1 || M < 1)
    throw std::invalid_argument("ppower_search: bad tolerances or bounds");
  for (std::int64_t p : table.primes()) {
    if (p <= N) continue;
    if (p > prime_bound) break;
    const double fp = eval(f, table, p).value();
    const double arch = u == 0.0
                            ? 0.0
                            : u * std::log(static_cast<double>(p)) / kTwoPi;
    for (std::int64_t m = k; m <= M; m += k) {
      double a = frac_unit(static_cast<double>(m) * fp);
      if (chord_dist(Angle::real_angle(a), z) >= eta) continue;
      double b = frac_unit(static_cast<double>(m) * arch);
      double d = b > 0.5 ? 1.0 - b : b;  // circular distance to angle 0
      if (d > delta) continue;
      return PPowerResult{p, m};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Orbit scan
// ---------------------------------------------------------------------------

enum class ShiftDirection {
  forward,   // (f(n), g(n+1))
  backward,  // (f(n-1), g(n))
};

struct OrbitScan {
  MultFnSpec f;
  MultFnSpec g;
  std::int64_t x = 0;
  ShiftDirection direction = ShiftDirection::forward;
  WeightedSample sample;  // d = 2, points for n = 2..x, weights 1/n
};

/// Materialized weighted orbit sample for n from 2 to x.  Points land in
/// deterministic ascending-n order; total log-mass is the harmonic mass of
/// [2, x] normalized by log x.
inline OrbitScan orbit_scan(const MultFnSpec& f, const MultFnSpec& g,
                            std::int64_t x, ShiftDirection direction,
                            const SpfTable& table) {
  if (x < 2) throw std::invalid_argument("orbit_scan: x must be >= 2");
  if ((x + 1) > table.limit() &&
      (x + 1) / table.limit() > table.limit())
    throw reach_error("orbit_scan: x beyond factorization reach");
  OrbitScan scan;
  scan.f = f;
  scan.g = g;
  scan.x = x;
  scan.direction = direction;
  scan.sample.dim = 2;
  scan.sample.norm = std::log(static_cast<double>(x));
  scan.sample.xs.reserve(static_cast<std::size_t>(x - 1));
  scan.sample.ys.reserve(static_cast<std::size_t>(x - 1));
  scan.sample.weights.reserve(static_cast<std::size_t>(x - 1));
  for (std::int64_t n = 2; n <= x; ++n) {
    Angle a, b;
    if (direction == ShiftDirection::forward) {
      a = eval(f, table, n);
      b = eval(g, table, n + 1);
    } else {
      a = eval(f, table, n - 1);
      b = eval(g, table, n);
    }
    scan.sample.xs.push_back(a.value());
    scan.sample.ys.push_back(b.value());
    scan.sample.weights.push_back(1.0 / static_cast<double>(n));
  }
  return scan;
}

/// Streaming variant: feeds cell masses (optionally of the powered orbit
/// (exp_f * f(n), exp_g * g(n+1))) directly into a grid accumulator, so
/// coverage at x = 1e7 needs no materialized sample.
inline CoverageReport orbit_coverage_streaming(
    const MultFnSpec& f, const MultFnSpec& g, std::int64_t x, int G,
    const SpfTable& table, std::int64_t exp_f = 1, std::int64_t exp_g = 1) {
  if (x < 2) throw std::invalid_argument("orbit_coverage_streaming: x >= 2");
  GridAccumulator acc(G, std::log(static_cast<double>(x)));
  for (std::int64_t n = 2; n <= x; ++n) {
    Angle a = eval(f, table, n).scaled(exp_f);
    Angle b = eval(g, table, n + 1).scaled(exp_g);
    acc.add(a.value(), b.value(), 1.0 / static_cast<double>(n));
  }
  return acc.report();
}

/// Seeded uniform random prime phases (the generic non-pretentious
/// stand-in); the seed is part of every report.
inline MultFnSpec random_phase_spec(std::uint64_t seed) {
  MultFnSpec f;
  f.base.rule = RandomPhaseRule{seed};
  return f;
}

}  // namespace orbitlab
