#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "orbitlab/torus.hpp"
#include "test_oracles.hpp"

using namespace orbitlab;

TEST_CASE("circle_value at rational angles", "[torus]") {
  CHECK(circle_value(Angle::zero()) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(circle_value(Angle::rational(1, 2)) -
                 std::complex<double>(-1.0, 0.0)) < 1e-15);
  auto z = circle_value(Angle::rational(1, 3));
  CHECK(std::abs(z - std::complex<double>(-0.5, std::sqrt(3.0) / 2.0)) < 1e-12);
  CHECK(std::fabs(std::abs(z) - 1.0) < 1e-15);
}

TEST_CASE("rational angle arithmetic stays reduced", "[torus]") {
  // associativity/commutativity and reduction, exhaustive over small dens
  for (std::int64_t b = 1; b <= 24; ++b) {
    for (std::int64_t a = 0; a < b; ++a) {
      for (std::int64_t d = 1; d <= 24; ++d) {
        for (std::int64_t c = 0; c < d; ++c) {
          Angle s = Angle::rational(a, b) + Angle::rational(c, d);
          REQUIRE(s.is_rational());
          CHECK(std::gcd(s.num, s.den) == 1);
          CHECK(s.num >= 0);
          CHECK(s.num < s.den);
          CHECK(s == Angle::rational(c, d) + Angle::rational(a, b));
        }
      }
    }
  }
  Angle x = (Angle::rational(1, 6) + Angle::rational(1, 10)) +
            Angle::rational(1, 15);
  Angle y = Angle::rational(1, 6) +
            (Angle::rational(1, 10) + Angle::rational(1, 15));
  CHECK(x == y);
  CHECK(x == Angle::rational(1, 3));
}

TEST_CASE("integer scaling of angles", "[torus]") {
  // k*(a/b) = (ka mod b)/b reduced; b*(a/b) = 0
  for (std::int64_t b = 1; b <= 24; ++b)
    for (std::int64_t a = 0; a < b; ++a) {
      Angle v = Angle::rational(a, b);
      CHECK(v.scaled(b).is_zero());
      for (std::int64_t k = 0; k <= 7; ++k)
        CHECK(v.scaled(k) == Angle::rational(k * a, b));
    }
  // real-variant equality is bitwise; scaled values agree only up to ulps
  CHECK(circ_dist(Angle::real_angle(0.3).scaled(4), Angle::real_angle(0.2)) <
        1e-15);
}

TEST_CASE("mixed arithmetic collapses to real; equality is variant-strict",
          "[torus]") {
  Angle r = Angle::rational(1, 4) + Angle::real_angle(0.25);
  CHECK_FALSE(r.is_rational());
  CHECK(r.value() == 0.5);
  CHECK_FALSE(Angle::rational(1, 2) == Angle::real_angle(0.5));
  CHECK(circ_dist(Angle::rational(1, 2), Angle::real_angle(0.5)) == 0.0);
  CHECK(Angle::rational(1, 2) == Angle::rational(2, 4));
}

TEST_CASE("ell1 distance", "[torus]") {
  TorusPoint2 o{Angle::zero(), Angle::zero()};
  CHECK(ell1_distance(o, o) == 0.0);
  TorusPoint2 anti{Angle::rational(1, 2), Angle::rational(1, 2)};
  CHECK(std::fabs(ell1_distance(o, anti) - 4.0) < 1e-14);
  TorusPoint2 quarter{Angle::rational(1, 4), Angle::zero()};
  CHECK(std::fabs(ell1_distance(o, quarter) - std::sqrt(2.0)) < 1e-12);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    TorusPoint2 a{Angle::real_angle(oracle::uniform01(rng)),
                  Angle::real_angle(oracle::uniform01(rng))};
    TorusPoint2 b{Angle::real_angle(oracle::uniform01(rng)),
                  Angle::real_angle(oracle::uniform01(rng))};
    TorusPoint2 c{Angle::real_angle(oracle::uniform01(rng)),
                  Angle::real_angle(oracle::uniform01(rng))};
    CHECK(ell1_distance(a, c) <=
          ell1_distance(a, b) + ell1_distance(b, c) + 1e-12);
    CHECK(std::fabs(ell1_distance(a, b) - ell1_distance(b, a)) < 1e-15);
  }
}

TEST_CASE("arc membership", "[torus]") {
  Arc arc(Angle::real_angle(0.25), 0.04);
  CHECK(in_arc(Angle::real_angle(0.25), arc));
  CHECK_FALSE(in_arc(Angle::real_angle(0.30), arc));  // distance 0.05 > 0.04
  CHECK(in_arc(Angle::real_angle(0.29), arc));        // boundary closed
  Arc full(Angle::real_angle(0.7), 0.5);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i)
    CHECK(in_arc(Angle::real_angle(oracle::uniform01(rng)), full));
  CHECK_THROWS_AS(Arc(Angle::zero(), 0.6), std::invalid_argument);
  CHECK_THROWS_AS(Arc(Angle::zero(), 0.0), std::invalid_argument);

  // representative-shift invariance: angles are stored mod 1 by construction
  CHECK(in_arc(Angle::real_angle(1.25), arc));
  CHECK(Angle::real_angle(1.25) == Angle::real_angle(0.25));
  CHECK(Angle::rational(5, 4) == Angle::rational(1, 4));
}

TEST_CASE("archimedean angle", "[torus]") {
  CHECK(archimedean_angle(5, 0.0) == Angle::zero());
  CHECK(archimedean_angle(1, 3.7) == Angle::zero());
  // t log n / 2pi mod 1 at n = 10, t = 1 (high-precision oracle value)
  CHECK(std::fabs(archimedean_angle(10, 1.0).value() - 0.3664677994397139) <
        1e-9);
  CHECK_FALSE(archimedean_angle(10, 1.0).is_rational());
  CHECK_THROWS_AS(archimedean_angle(0, 1.0), std::invalid_argument);
}

TEST_CASE("chord distance matches complex embedding", "[torus]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Angle a = Angle::real_angle(oracle::uniform01(rng));
    Angle b = Angle::real_angle(oracle::uniform01(rng));
    CHECK(std::fabs(chord_dist(a, b) -
                    std::abs(circle_value(a) - circle_value(b))) < 1e-12);
  }
}
