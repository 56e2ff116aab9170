#pragma once

// Angle arithmetic on R/Z and T^2.  Angles are the universal currency for
// values of unimodular multiplicative functions: a point z on the unit
// circle is represented by t in [0,1) with z = e(t) = exp(2*pi*i*t).
//
// The representation is hybrid: roots of unity are exact reduced fractions
// (so level-set predicates like "h(n) = 1" are decidable without
// tolerances), Archimedean and Kronecker angles are doubles in [0,1).
// Arithmetic on two rationals stays rational; anything touching a real
// collapses to real.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "orbitlab/arith.hpp"

namespace orbitlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

/// Fractional part mapped into [0,1) (guards the x - floor(x) == 1.0 edge).
inline double frac_unit(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

struct Angle {
  // den > 0: exact rational num/den, reduced, 0 <= num < den.
  // den == 0: real value in [0,1) stored in `real`.
  std::int64_t num = 0;
  std::int64_t den = 1;
  double real = 0.0;

  static Angle zero() { return Angle{}; }

  static Angle rational(std::int64_t a, std::int64_t b) {
    if (b == 0) throw std::invalid_argument("Angle::rational: zero denominator");
    if (b < 0) { a = -a; b = -b; }
    a %= b;
    if (a < 0) a += b;
    std::int64_t g = std::gcd(a, b);
    Angle r;
    r.num = a / g;
    r.den = b / g;
    return r;
  }

  static Angle real_angle(double v) {
    Angle r;
    r.den = 0;
    r.real = frac_unit(v);
    return r;
  }

  [[nodiscard]] bool is_rational() const { return den != 0; }
  [[nodiscard]] bool is_zero() const { return is_rational() && num == 0; }

  [[nodiscard]] double value() const {
    return is_rational() ? static_cast<double>(num) / static_cast<double>(den)
                         : real;
  }

  [[nodiscard]] Angle operator+(const Angle& o) const {
    if (is_rational() && o.is_rational()) {
      __int128 n = static_cast<__int128>(num) * o.den +
                   static_cast<__int128>(o.num) * den;
      __int128 d = static_cast<__int128>(den) * o.den;
      n %= d;
      __int128 g = gcd128(n, d);
      Angle r;
      r.num = static_cast<std::int64_t>(n / g);
      r.den = static_cast<std::int64_t>(d / g);
      return r;
    }
    return real_angle(value() + o.value());
  }

  [[nodiscard]] Angle operator-() const {
    if (is_rational()) return num == 0 ? zero() : rational(den - num, den);
    return real == 0.0 ? real_angle(0.0) : real_angle(1.0 - real);
  }

  [[nodiscard]] Angle operator-(const Angle& o) const { return *this + (-o); }

  /// Integer multiple k*angle mod 1; exact in the rational case.
  [[nodiscard]] Angle scaled(std::int64_t k) const {
    if (is_rational()) {
      __int128 n = (static_cast<__int128>(k) * num) % den;
      if (n < 0) n += den;
      __int128 g = gcd128(n, den);
      Angle r;
      r.num = static_cast<std::int64_t>(n / g);
      r.den = static_cast<std::int64_t>(den / g);
      return r;
    }
    return real_angle(static_cast<double>(k) * real);
  }

  /// Exact equality.  A rational and a real variant never compare equal;
  /// use circ_dist for closeness queries.
  bool operator==(const Angle& o) const {
    if (is_rational() != o.is_rational()) return false;
    if (is_rational()) return num == o.num && den == o.den;
    return real == o.real;
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
};

/// Distance on R/Z: min(|x-y|, 1-|x-y|) of representatives.
inline double circ_dist(const Angle& a, const Angle& b) {
  double d = std::fabs(a.value() - b.value());
  if (d > 0.5) d = 1.0 - d;
  return d;
}

/// Chord distance |e(a) - e(b)| = 2|sin(pi*(a-b))|.
inline double chord_dist(const Angle& a, const Angle& b) {
  return 2.0 * std::fabs(std::sin(std::numbers::pi_v<double> *
                                  (a.value() - b.value())));
}

/// e(t) = exp(2*pi*i*t).
inline std::complex<double> circle_value(const Angle& a) {
  double th = kTwoPi * a.value();
  return {std::cos(th), std::sin(th)};
}

struct TorusPoint2 {
  Angle first;
  Angle second;
};

/// ||.||_{l1} distance between the complex embeddings of two torus points.
inline double ell1_distance(const TorusPoint2& p, const TorusPoint2& q) {
  return std::abs(circle_value(p.first) - circle_value(q.first)) +
         std::abs(circle_value(p.second) - circle_value(q.second));
}

/// Closed arc on T: all x with circular distance to center <= half_length.
struct Arc {
  Angle center;
  double half_length;  // in (0, 1/2]

  Arc(Angle c, double h) : center(c), half_length(h) {
    if (!(h > 0.0) || h > 0.5)
      throw std::invalid_argument("Arc: half_length must lie in (0, 1/2]");
  }

  [[nodiscard]] double length() const { return 2.0 * half_length; }
};

inline bool in_arc(const Angle& x, const Arc& arc) {
  return circ_dist(x, arc.center) <= arc.half_length;
}

/// Angle of the Archimedean character n^{it}: t*log(n)/(2*pi) mod 1.
inline Angle archimedean_angle(std::int64_t n, double t) {
  if (n < 1) throw std::invalid_argument("archimedean_angle: n must be >= 1");
  if (t == 0.0 || n == 1) return Angle::zero();
  return Angle::real_angle(t * std::log(static_cast<double>(n)) / kTwoPi);
}

}  // namespace orbitlab
