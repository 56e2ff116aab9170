#pragma once

// Extremal trigonometric approximations to the sawtooth psi(t) = {t} - 1/2
// and derived interval majorants/minorants (Vaaler's construction).  The
// degree-K polynomial B_K satisfies
//   -B_K(-t) <= psi(t) <= B_K(t),   B_K^(0) = 1/(2(K+1)),
//   B_K^(m) = 0 for |m| > K,        B_K^(m) = O(1/m) otherwise,
// which is everything the sieve lower-bound arguments consume.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "orbitlab/torus.hpp"

namespace orbitlab {

/// Trigonometric polynomial sum_{|m| <= K} c_m e(mt), coefficients indexed
/// m in [-K, K].  Real-valued polynomials satisfy c_{-m} = conj(c_m).
struct TrigPolynomial {
  int degree = 0;
  std::vector<std::complex<double>> coeffs;  // index m + degree

  explicit TrigPolynomial(int K)
      : degree(K), coeffs(2 * static_cast<std::size_t>(K) + 1) {}

  [[nodiscard]] std::complex<double> coeff(int m) const {
    if (m < -degree || m > degree) return {0.0, 0.0};
    return coeffs[static_cast<std::size_t>(m + degree)];
  }

  void set_coeff(int m, std::complex<double> c) {
    coeffs[static_cast<std::size_t>(m + degree)] = c;
  }

  [[nodiscard]] std::complex<double> eval(double t) const {
    // direct coefficient summation; K stays small at desk scale
    std::complex<double> acc{0.0, 0.0};
    for (int m = -degree; m <= degree; ++m) {
      double th = kTwoPi * m * t;
      acc += coeff(m) * std::complex<double>(std::cos(th), std::sin(th));
    }
    return acc;
  }

  [[nodiscard]] double eval_real(double t) const { return eval(t).real(); }
};

inline double sawtooth(double t) { return frac_unit(t) - 0.5; }

namespace detail {

// Vaaler's multiplier: jhat(t) = pi*t*(1-t)*cot(pi*t) + t on (0,1),
// jhat(0) = 1, jhat(1) = 0, extended evenly.
inline double vaaler_jhat(double t) {
  t = std::fabs(t);
  if (t >= 1.0) return 0.0;
  if (t == 0.0) return 1.0;
  return std::numbers::pi_v<double> * t * (1.0 - t) /
             std::tan(std::numbers::pi_v<double> * t) +
         t;
}

}  // namespace detail

/// Degree-K Beurling polynomial majorizing the sawtooth: B_K = V_K +
/// Fejer_{K+1}/(2(K+1)) with V_K the Vaaler interpolation of psi.  The
/// Fourier coefficients are explicit:
///   B_K^(0)  = 1/(2(K+1))
///   B_K^(m)  = (i/(2 pi m)) jhat(m/(K+1)) + (1 - |m|/(K+1))/(2(K+1)).
inline TrigPolynomial beurling_polynomial(int K) {
  if (K < 1) throw std::invalid_argument("beurling_polynomial: K must be >= 1");
  TrigPolynomial B(K);
  const double J = K + 1.0;
  B.set_coeff(0, {1.0 / (2.0 * J), 0.0});
  for (int m = 1; m <= K; ++m) {
    double sawtooth_coeff = 1.0 / (kTwoPi * m);  // psi^(m) = i/(2 pi m)
    double fejer = (1.0 - m / J) / (2.0 * J);
    std::complex<double> c(fejer, sawtooth_coeff * detail::vaaler_jhat(m / J));
    B.set_coeff(m, c);
    B.set_coeff(-m, std::conj(c));
  }
  return B;
}

/// Majorant of the indicator of [a, b]:
///   1_[a,b](t) <= (b-a) + B_K(t-b) + B_K(a-t),
/// a trig polynomial of degree K with mean (b-a) + 1/(K+1).
inline TrigPolynomial interval_majorant(int K, double a, double b) {
  if (!(0.0 <= a && a < b && b < 1.0))
    throw std::invalid_argument("interval_majorant: need 0 <= a < b < 1");
  TrigPolynomial B = beurling_polynomial(K);
  TrigPolynomial P(K);
  for (int m = -K; m <= K; ++m) {
    double thb = -kTwoPi * m * b;
    double tha = -kTwoPi * m * a;
    std::complex<double> c =
        B.coeff(m) * std::complex<double>(std::cos(thb), std::sin(thb)) +
        B.coeff(-m) * std::complex<double>(std::cos(tha), std::sin(tha));
    if (m == 0) c += b - a;
    P.set_coeff(m, c);
  }
  return P;
}

struct MinorantResult {
  TrigPolynomial poly;
  // (b-a) - 1/(K+1) <= 0: the minorant's mean is not positive and the
  // polynomial is useless for lower bounds (returned as-is regardless).
  bool degenerate_width = false;
};

/// Minorant: (b-a) - B_K(b-t) - B_K(t-a) <= 1_[a,b](t), mean (b-a) - 1/(K+1).
inline MinorantResult interval_minorant(int K, double a, double b) {
  if (!(0.0 <= a && a < b && b < 1.0))
    throw std::invalid_argument("interval_minorant: need 0 <= a < b < 1");
  TrigPolynomial B = beurling_polynomial(K);
  MinorantResult out{TrigPolynomial(K), (b - a) <= 2.0 / (K + 1.0)};
  for (int m = -K; m <= K; ++m) {
    double thb = -kTwoPi * m * b;
    double tha = -kTwoPi * m * a;
    std::complex<double> c =
        -(B.coeff(-m) * std::complex<double>(std::cos(thb), std::sin(thb)) +
          B.coeff(m) * std::complex<double>(std::cos(tha), std::sin(tha)));
    if (m == 0) c += b - a;
    out.poly.set_coeff(m, c);
  }
  return out;
}

}  // namespace orbitlab
