#pragma once

// Exact integer substrate: smallest-prime-factor sieve, factorization,
// P^-(n), prime counting, radicals and small exact rationals.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab {

/// Thrown when a computation would exceed the documented factorization /
/// summation reach (as opposed to a malformed configuration).
class reach_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sentinel for P^-(1): the empty product has no prime factor, so the
/// convention "P^-(1) > N for every N" is encoded as +infinity.
inline constexpr std::int64_t kPMinusInfinity =
    std::numeric_limits<std::int64_t>::max();

struct Factorization {
  // (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
  std::vector<std::pair<std::int64_t, int>> pairs;

  [[nodiscard]] std::int64_t value() const {
    std::int64_t v = 1;
    for (auto [p, e] : pairs)
      for (int i = 0; i < e; ++i) v *= p;
    return v;
  }
};

/// Smallest-prime-factor table over [2, limit].  Flat array of 32-bit
/// entries (4 bytes per integer); a limit of 1e7 costs ~40 MB.  After
/// construction the table is immutable and safe to share across threads.
///
/// Factorization reach: n <= limit directly via the table; for
/// limit < n <= limit^2 a trial-division fallback over the sieved primes
/// is used (needed because Bn+1 in sieve counts can exceed the n-range).
class SpfTable {
 public:
  explicit SpfTable(std::int64_t x_max) : limit_(x_max) {
    if (x_max < 2) throw std::invalid_argument("build_spf: x_max must be >= 2");
    if (x_max > 2'000'000'000LL)
      throw std::invalid_argument("build_spf: x_max above documented cap 2e9");
    spf_.assign(static_cast<std::size_t>(x_max) + 1, 0);
    for (std::int64_t i = 2; i * i <= x_max; ++i) {
      if (spf_[i] != 0) continue;
      for (std::int64_t j = i * i; j <= x_max; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
    for (std::int64_t n = 2; n <= x_max; ++n) {
      if (spf_[n] == 0) {
        spf_[n] = static_cast<std::uint32_t>(n);
        primes_.push_back(n);
      }
    }
  }

  [[nodiscard]] std::int64_t limit() const { return limit_; }
  [[nodiscard]] const std::vector<std::int64_t>& primes() const { return primes_; }

  [[nodiscard]] bool is_prime(std::int64_t n) const {
    return n >= 2 && n <= limit_ && spf_[n] == static_cast<std::uint64_t>(n);
  }

  /// Number of primes <= n (n may exceed the table only up to limit()).
  [[nodiscard]] std::int64_t prime_pi(std::int64_t n) const {
    if (n > limit_) throw std::invalid_argument("prime_pi: beyond table limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), n);
    return static_cast<std::int64_t>(it - primes_.begin());
  }

  /// Smallest prime factor; +infinity sentinel for n = 1.
  [[nodiscard]] std::int64_t p_minus(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("p_minus: n must be >= 1");
    if (n == 1) return kPMinusInfinity;
    if (n <= limit_) return spf_[n];
    return p_minus_extended(n);
  }

  /// Exact factorization, n <= limit.
  [[nodiscard]] Factorization factorize(std::int64_t n) const {
    if (n < 1 || n > limit_)
      throw std::invalid_argument("factorize: n out of table range");
    Factorization f;
    while (n > 1) {
      std::int64_t p = spf_[n];
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      f.pairs.emplace_back(p, e);
    }
    return f;
  }

  /// Factorization with the documented fallback reach limit^2.
  [[nodiscard]] Factorization factorize_extended(std::int64_t n) const {
    if (n >= 1 && n <= limit_) return factorize(n);
    if (n < 1 || n / limit_ > limit_)
      throw reach_error("factorize_extended: n beyond limit^2 comfort zone");
    Factorization f;
    for (std::int64_t p : primes_) {
      if (p * p > n) break;
      if (n % p != 0) continue;
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      f.pairs.emplace_back(p, e);
      if (n > 1 && n <= limit_) {
        // remainder fits the table; finish there
        auto rest = factorize(n);
        f.pairs.insert(f.pairs.end(), rest.pairs.begin(), rest.pairs.end());
        return f;
      }
    }
    if (n > 1) f.pairs.emplace_back(n, 1);  // leftover cofactor is prime
    return f;
  }

 private:
  [[nodiscard]] std::int64_t p_minus_extended(std::int64_t n) const {
    if (n / limit_ > limit_)
      throw reach_error("p_minus: n beyond limit^2 comfort zone");
    for (std::int64_t p : primes_) {
      if (p * p > n) break;
      if (n % p == 0) return p;
    }
    return n;  // no sieved prime divides it and sqrt(n) <= limit: prime
  }

  std::int64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int64_t> primes_;
};

inline SpfTable build_spf(std::int64_t x_max) { return SpfTable(x_max); }

inline std::int64_t p_minus(const SpfTable& table, std::int64_t n) {
  return table.p_minus(n);
}

inline Factorization factorize(const SpfTable& table, std::int64_t n) {
  return table.factorize(n);
}

/// True iff no prime <= N divides n (i.e. P^-(n) > N), by direct trial
/// division over the sieved primes.  Exact for any n >= 1 regardless of the
/// table limit; n = 1 qualifies by the +infinity convention.
inline bool p_minus_greater(const SpfTable& table, std::int64_t n,
                            std::int64_t N) {
  if (n < 1) throw std::invalid_argument("p_minus_greater: n must be >= 1");
  for (std::int64_t p : table.primes()) {
    if (p > N) break;
    if (n % p == 0) return false;
  }
  return true;
}

inline std::int64_t radical(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("radical: n must be >= 1");
  std::int64_t r = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    r *= p;
    while (n % p == 0) n /= p;
  }
  return n > 1 ? r * n : r;
}

inline std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("euler_phi: n must be >= 1");
  std::int64_t r = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    r -= r / p;
    while (n % p == 0) n /= p;
  }
  if (n > 1) r -= r / n;
  return r;
}

/// (a, b^inf) = prod_{p | b} p^{v_p(a)}: the b-supported part of a.
inline std::int64_t part_supported_by(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1) throw std::invalid_argument("part_supported_by: args >= 1");
  std::int64_t g = std::gcd(a, b);
  std::int64_t part = 1;
  while (g > 1) {
    part *= g;
    a /= g;
    g = std::gcd(a, g);
  }
  return part;
}

/// a / (a, b^inf): strips every b-supported prime power from a.
inline std::int64_t part_coprime_to(std::int64_t a, std::int64_t b) {
  return a / part_supported_by(a, b);
}

/// Small exact rational, always kept reduced with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    reduce();
  }

  void reduce() {
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  [[nodiscard]] double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  Rational operator*(const Rational& o) const {
    // cross-reduce before multiplying to dodge overflow
    std::int64_t g1 = std::gcd(num < 0 ? -num : num, o.den);
    std::int64_t g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
    return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
  }
  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
};

}  // namespace orbitlab
