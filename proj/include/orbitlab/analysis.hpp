#pragma once

// Analytic statistics over multiplicative functions: logarithmic averages,
// the pretentious distance D(f,g;x), the imaginary drift J_f(x;N), binary
// correlation sums and the 1-pretentious concentration diagnostic.
//
// Sums that feed doubling-grid decay comparisons use compensated (Neumaier)
// accumulation so float drift cannot masquerade as analytic decay.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orbitlab/arith.hpp"
#include "orbitlab/multfunc.hpp"
#include "orbitlab/sievecount.hpp"
#include "orbitlab/torus.hpp"

namespace orbitlab {

namespace detail {

struct KahanReal {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + comp; }
};

struct KahanComplex {
  KahanReal re, im;
  void add(std::complex<double> v) {
    re.add(v.real());
    im.add(v.imag());
  }
  [[nodiscard]] std::complex<double> value() const {
    return {re.value(), im.value()};
  }
};

}  // namespace detail

struct DistanceResult {
  double squared_distance = 0.0;
  std::int64_t range_low = 0;   // primes in (range_low, range_high]
  std::int64_t range_high = 0;
  std::int64_t prime_terms = 0;

  [[nodiscard]] double distance() const { return std::sqrt(squared_distance); }
};

/// D(f,g; N_low, x)^2 = sum over primes N_low < p <= x of
/// (1 - Re(f(p) conj(g(p)))) / p.  Symmetric; zero iff f = g on the range;
/// additive over disjoint prime ranges.
inline DistanceResult pretentious_distance_sq(const MultFnSpec& f,
                                              const MultFnSpec& g,
                                              std::int64_t N_low,
                                              std::int64_t x,
                                              const SpfTable& table) {
  if (N_low >= x)
    throw std::invalid_argument("pretentious_distance_sq: need N_low < x");
  if (x > table.limit())
    throw reach_error("pretentious_distance_sq: x beyond prime table");
  detail::KahanReal acc;
  std::int64_t terms = 0;
  for (std::int64_t p : table.primes()) {
    if (p <= N_low) continue;
    if (p > x) break;
    // full values at the prime, twist included
    double d = eval(f, table, p).value() - eval(g, table, p).value();
    acc.add((1.0 - std::cos(kTwoPi * d)) / static_cast<double>(p));
    ++terms;
  }
  return {acc.value(), N_low, x, terms};
}

inline DistanceResult pretentious_distance_sq(const MultFnSpec& f,
                                              const MultFnSpec& g,
                                              std::int64_t x,
                                              const SpfTable& table) {
  return pretentious_distance_sq(f, g, 0, x, table);
}

struct TriangleReport {
  double d_fg = 0.0, d_gh = 0.0, d_fh = 0.0;
  bool triangle_holds = false;        // d(f,h) <= d(f,g) + d(g,h) + 1e-9
  double d_fg_powered = 0.0;          // D(f^k, g^k; x)
  std::int64_t power = 1;
  bool power_inequality_holds = false;  // k*D(f,g) >= D(f^k,g^k) - 1e-9
};

namespace detail {

inline MultFnSpec powered_spec(const MultFnSpec& f, std::int64_t k,
                               const SpfTable& table, std::int64_t bound) {
  // materialize f^k on primes <= bound as an exception table
  MultFnSpec out;
  out.twist_t = f.twist_t * static_cast<double>(k);
  for (std::int64_t p : table.primes()) {
    if (p > bound) break;
    out.exceptions[p] = f.prime_angle(p).scaled(k);
  }
  return out;
}

}  // namespace detail

/// Triangle inequality D(f,h) <= D(f,g) + D(g,h) and the power inequality
/// k D(f,g) >= D(f^k, g^k), both at tolerance 1e-9.
inline TriangleReport triangle_check(const MultFnSpec& f, const MultFnSpec& g,
                                     const MultFnSpec& h, std::int64_t x,
                                     const SpfTable& table,
                                     std::int64_t k = 2) {
  TriangleReport rep;
  rep.power = k;
  rep.d_fg = pretentious_distance_sq(f, g, x, table).distance();
  rep.d_gh = pretentious_distance_sq(g, h, x, table).distance();
  rep.d_fh = pretentious_distance_sq(f, h, x, table).distance();
  rep.triangle_holds = rep.d_fh <= rep.d_fg + rep.d_gh + 1e-9;
  MultFnSpec fk = detail::powered_spec(f, k, table, x);
  MultFnSpec gk = detail::powered_spec(g, k, table, x);
  rep.d_fg_powered = pretentious_distance_sq(fk, gk, x, table).distance();
  rep.power_inequality_holds =
      static_cast<double>(k) * rep.d_fg >= rep.d_fg_powered - 1e-9;
  return rep;
}

/// E^log_{n<=x} f(n) = (1/log x) sum_{n<=x} e(f(n))/n.
inline std::complex<double> log_average(const MultFnSpec& f, std::int64_t x,
                                        const SpfTable& table) {
  if (x < 2) throw std::invalid_argument("log_average: x must be >= 2");
  detail::KahanComplex acc;
  for (std::int64_t n = x; n >= 1; --n) {
    Angle a = eval(f, table, n);
    acc.add(circle_value(a) / static_cast<double>(n));
  }
  return acc.value() / std::log(static_cast<double>(x));
}

struct CorrelationResult {
  std::complex<double> value;  // normalized by log x
  std::int64_t x = 0;
  std::int64_t a1 = 1, b1 = 0, a2 = 1, b2 = 0;
  // a1*b2 - a2*b1 == 0: degenerate (proportional) linear forms; the sum
  // need not decay
  bool degenerate_forms = false;
};

/// (1/log x) sum_{n<=x} f(a1 n + b1) g(a2 n + b2) / n  (no conjugation;
/// pass a conjugated spec when the conjugate correlation is wanted).
inline CorrelationResult binary_correlation(const MultFnSpec& f,
                                            const MultFnSpec& g,
                                            std::int64_t a1, std::int64_t b1,
                                            std::int64_t a2, std::int64_t b2,
                                            std::int64_t x,
                                            const SpfTable& table) {
  if (a1 < 1 || a2 < 1 || b1 < 0 || b2 < 0)
    throw std::invalid_argument("binary_correlation: need a_i >= 1, b_i >= 0");
  if (x < 2) throw std::invalid_argument("binary_correlation: x must be >= 2");
  std::int64_t top = std::max(a1 * x + b1, a2 * x + b2);
  if (top / table.limit() > table.limit())
    throw reach_error("binary_correlation: linear forms beyond table reach");
  detail::KahanComplex acc;
  for (std::int64_t n = x; n >= 1; --n) {
    Angle a = eval(f, table, a1 * n + b1) + eval(g, table, a2 * n + b2);
    acc.add(circle_value(a) / static_cast<double>(n));
  }
  CorrelationResult res;
  res.value = acc.value() / std::log(static_cast<double>(x));
  res.x = x;
  res.a1 = a1; res.b1 = b1; res.a2 = a2; res.b2 = b2;
  res.degenerate_forms = (a1 * b2 - a2 * b1) == 0;
  return res;
}

/// Raw twisted sums S(m1,m2) = sum_{2<=n<=x} f(n)^{m1} g(n+1)^{m2} / n for
/// all 0 <= |m1|,|m2| <= K, in one pass over n (feeds erdos_turan_bound;
/// n starts at 2 to match the orbit sample).
inline std::map<std::pair<int, int>, std::complex<double>> correlation_grid(
    const MultFnSpec& f, const MultFnSpec& g, int K, std::int64_t x,
    const SpfTable& table) {
  if (K < 1) throw std::invalid_argument("correlation_grid: K must be >= 1");
  const int W = 2 * K + 1;
  std::vector<detail::KahanComplex> acc(static_cast<std::size_t>(W) * W);
  std::vector<std::complex<double>> fpow(W), gpow(W);
  for (std::int64_t n = x; n >= 2; --n) {
    std::complex<double> zf = circle_value(eval(f, table, n));
    std::complex<double> zg = circle_value(eval(g, table, n + 1));
    fpow[K] = gpow[K] = 1.0;
    for (int m = 1; m <= K; ++m) {
      fpow[K + m] = fpow[K + m - 1] * zf;
      fpow[K - m] = std::conj(fpow[K + m]);
      gpow[K + m] = gpow[K + m - 1] * zg;
      gpow[K - m] = std::conj(gpow[K + m]);
    }
    double invn = 1.0 / static_cast<double>(n);
    for (int i = 0; i < W; ++i)
      for (int j = 0; j < W; ++j)
        acc[static_cast<std::size_t>(i) * W + j].add(fpow[i] * gpow[j] * invn);
  }
  std::map<std::pair<int, int>, std::complex<double>> out;
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      out[{m1, m2}] =
          acc[static_cast<std::size_t>(m1 + K) * W + (m2 + K)].value();
  return out;
}

/// Non-pretentiousness score: approximates
///   min over chi mod q <= Q, |t| <= x  of  D(f, chi~ n^{it}; x)^2
/// on a symmetric logarithmic t-grid (0, +-t_min * growth^j up to x) with
/// `grid_points` samples per sign.  The exact infimum is not computable;
/// the grid resolution is part of the score's definition, so callers must
/// quote it when comparing scores.
struct PretentiousnessScore {
  double min_dist_sq = 0.0;
  std::int64_t best_modulus = 1;
  std::int64_t best_index = 0;
  double best_t = 0.0;
};

inline PretentiousnessScore pretentiousness_score(const MultFnSpec& f,
                                                  std::int64_t max_modulus,
                                                  std::int64_t x,
                                                  const SpfTable& table,
                                                  int grid_points = 24,
                                                  double t_min = 1e-3) {
  if (max_modulus < 1 || grid_points < 1)
    throw std::invalid_argument("pretentiousness_score: bad parameters");
  // t-grid: 0 and +- t_min * r^j, geometric up to x
  std::vector<double> ts{0.0};
  double ratio = std::pow(static_cast<double>(x) / t_min,
                          1.0 / std::max(1, grid_points - 1));
  double t = t_min;
  for (int j = 0; j < grid_points; ++j, t *= ratio) {
    ts.push_back(t);
    ts.push_back(-t);
  }
  PretentiousnessScore best;
  best.min_dist_sq = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= max_modulus; ++q) {
    auto chars = character_table(q);
    for (std::size_t idx = 0; idx < chars.size(); ++idx) {
      MultFnSpec target;
      target.base.rule = DirichletRule{chars[idx]};
      for (double tv : ts) {
        target.twist_t = tv;
        double d =
            pretentious_distance_sq(f, target, x, table).squared_distance;
        if (d < best.min_dist_sq) {
          best.min_dist_sq = d;
          best.best_modulus = q;
          best.best_index = static_cast<std::int64_t>(idx);
          best.best_t = tv;
        }
      }
    }
  }
  return best;
}

/// J_f(x; N) = sum_{N < p <= x} Im(f(p)) / p  (exact partial prime sum).
inline double imaginary_drift(const MultFnSpec& f, std::int64_t N,
                              std::int64_t x, const SpfTable& table) {
  if (N >= x) throw std::invalid_argument("imaginary_drift: need N < x");
  if (x > table.limit()) throw reach_error("imaginary_drift: x beyond table");
  detail::KahanReal acc;
  for (std::int64_t p : table.primes()) {
    if (p <= N) continue;
    if (p > x) break;
    Angle a = eval(f, table, p);
    if (a.is_rational() && (2 * a.num) % a.den == 0) continue;  // Im(+-1) = 0
    acc.add(std::sin(kTwoPi * a.value()) / static_cast<double>(p));
  }
  return acc.value();
}

/// Concentration diagnostic for 1-pretentious functions:
///   LHS = sum_{n<=x, P^-(n(Bn+1))>N} |f(n) - e^{i J_f(x;N)}|^2
/// against the bracketed right-hand side pieces
///   Phi_{N,B}(x) * (D(f,1;N,x)^2 + 1/N)  and  4^{pi(N)} x loglog x / log x.
/// The three RHS terms are reported separately (their interplay carries an
/// unquantified implicit constant); ratio = LHS / (sum of both) is the
/// statistic whose stability the tests assert.
struct ConcentrationReport {
  double lhs = 0.0;
  double phi = 0.0;            // Phi_{N,B}(x)
  double dist_sq = 0.0;        // D(f,1;N,x)^2
  double inv_N = 0.0;
  double smooth_tail = 0.0;    // 4^{pi(N)} x loglog x / log x
  double drift = 0.0;          // J_f(x;N), radians
  double rhs = 0.0;
  double ratio = 0.0;
};

inline ConcentrationReport concentration_diagnostic(
    const MultFnSpec& f, std::int64_t N, std::int64_t B, std::int64_t x,
    const SpfTable& table, bool shifted_argument = false) {
  if (B % 2 != 0)
    throw std::invalid_argument("concentration_diagnostic: B must be even");
  if (N < 2 || N >= x)
    throw std::invalid_argument("concentration_diagnostic: need 2 <= N < x");
  SieveParams params{N, B, 1, 0};
  detail::check_reach(params, x, table);

  ConcentrationReport rep;
  rep.drift = imaginary_drift(f, N, x, table);
  std::complex<double> target{std::cos(rep.drift), std::sin(rep.drift)};
  detail::KahanReal lhs;
  std::int64_t phi_cnt = 0;
  for (std::int64_t n = 1; n <= x; ++n) {
    if (!detail::sieve_cond(table, n, N) ||
        !detail::sieve_cond(table, B * n + 1, N))
      continue;
    ++phi_cnt;
    std::int64_t arg = shifted_argument ? B * n + 1 : n;
    std::complex<double> v = circle_value(eval(f, table, arg));
    lhs.add(std::norm(v - target));
  }
  rep.lhs = lhs.value();
  rep.phi = static_cast<double>(phi_cnt);
  auto one = MultFnSpec{};
  rep.dist_sq = pretentious_distance_sq(f, one, N, x, table).squared_distance;
  rep.inv_N = 1.0 / static_cast<double>(N);
  double lx = std::log(static_cast<double>(x));
  rep.smooth_tail = std::pow(4.0, static_cast<double>(table.prime_pi(N))) *
                    static_cast<double>(x) * std::log(lx) / lx;
  rep.rhs = rep.phi * (rep.dist_sq + rep.inv_N) + rep.smooth_tail;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace orbitlab
