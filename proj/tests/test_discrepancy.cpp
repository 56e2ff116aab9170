#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "orbitlab/discrepancy.hpp"
#include "orbitlab/torus.hpp"
#include "test_oracles.hpp"

using namespace orbitlab;

namespace {

WeightedSample harmonic_sample_1d(std::vector<double> pts) {
  WeightedSample s;
  s.dim = 1;
  s.xs = std::move(pts);
  double N = static_cast<double>(s.xs.size()) + 1.0;
  for (std::size_t i = 0; i < s.xs.size(); ++i)
    s.weights.push_back(1.0 / static_cast<double>(i + 2));
  s.norm = std::log(N);
  return s;
}

}  // namespace

TEST_CASE("star discrepancy d=1 basics", "[discrepancy]") {
  // all mass at 0: arbitrarily small anchored arcs capture everything
  WeightedSample s;
  s.dim = 1;
  s.xs = {0.0, 0.0, 0.0};
  s.weights = {1.0, 1.0, 1.0};
  s.norm = 3.0;
  CHECK(std::fabs(star_discrepancy(s) - 1.0) < 1e-14);

  // {0, 1/2} with equal weights: d* = 1/2
  WeightedSample t;
  t.dim = 1;
  t.xs = {0.0, 0.5};
  t.weights = {1.0, 1.0};
  t.norm = 2.0;
  CHECK(std::fabs(star_discrepancy(t) - 0.5) < 1e-14);
}

TEST_CASE("kronecker sequence has small discrepancy", "[discrepancy]") {
  WeightedSample s;
  s.dim = 1;
  const int M = 10'000;
  double alpha = std::sqrt(2.0) - 1.0;
  for (int n = 1; n <= M; ++n) {
    s.xs.push_back(frac_unit(n * alpha));
    s.weights.push_back(1.0);
  }
  s.norm = M;
  CHECK(star_discrepancy(s) < 0.01);
}

TEST_CASE("exact d=1 full discrepancy lies in [d*, 2 d*]", "[discrepancy]") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts(1000);
    for (auto& p : pts) p = oracle::uniform01(rng);
    auto s = harmonic_sample_1d(pts);
    auto rep = full_discrepancy_bound(s);
    REQUIRE(rep.exact_full.has_value());
    CHECK(*rep.exact_full >= rep.d_star);
    CHECK(*rep.exact_full <= 2.0 * rep.d_star);
    CHECK(rep.d_star <= 1.0 + 1e-12);
  }
}

TEST_CASE("exact d=1 discrepancy matches the two-endpoint oracle",
          "[discrepancy]") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t M = 3 + rng() % 120;
    std::vector<double> pts(M), ws(M);
    for (auto& p : pts) p = oracle::uniform01(rng);
    for (auto& w : ws) w = 0.1 + oracle::uniform01(rng);
    WeightedSample s;
    s.dim = 1;
    s.xs = pts;
    s.weights = ws;
    s.norm = 1.7;
    auto rep = full_discrepancy_bound(s);
    REQUIRE(rep.exact_full.has_value());
    double expect = oracle::two_endpoint_full_discrepancy(pts, ws, s.norm);
    CHECK(std::fabs(*rep.exact_full - expect) < 1e-12);
  }
}

TEST_CASE("star discrepancy d=2", "[discrepancy]") {
  SECTION("single point at the origin") {
    WeightedSample s;
    s.dim = 2;
    s.xs = {0.0};
    s.ys = {0.0};
    s.weights = {1.0};
    s.norm = 1.0;
    CHECK(std::fabs(star_discrepancy(s) - 1.0) < 1e-14);
    auto rep = full_discrepancy_bound(s);
    CHECK(rep.bound_hi == 4.0 * rep.d_star);
  }

  SECTION("product structure: grid of uniform points") {
    // 64 points on the (i/8 + 1/16) lattice, equal weights: small d*
    WeightedSample s;
    s.dim = 2;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        s.xs.push_back(i / 8.0 + 1.0 / 16.0);
        s.ys.push_back(j / 8.0 + 1.0 / 16.0);
        s.weights.push_back(1.0);
      }
    s.norm = 64.0;
    double d = star_discrepancy(s);
    CHECK(d < 0.15);
    CHECK(d > 0.0);
  }

  SECTION("agrees with a brute-force corner scan on small samples") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 10; ++trial) {
      std::size_t M = 3 + rng() % 40;
      WeightedSample s;
      s.dim = 2;
      for (std::size_t i = 0; i < M; ++i) {
        s.xs.push_back(oracle::uniform01(rng));
        s.ys.push_back(oracle::uniform01(rng));
        s.weights.push_back(0.2 + oracle::uniform01(rng));
      }
      s.norm = 2.0 + oracle::uniform01(rng);
      // oracle: check every pair of candidate corners with one-sided masses
      double best = 0.0;
      std::vector<double> cxs = s.xs, cys = s.ys;
      cxs.push_back(1.0);
      cys.push_back(1.0);
      for (double y1 : cxs) {
        for (double y2 : cys) {
          for (int side = 0; side < 4; ++side) {
            double mass = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
              bool inx = (side & 1) ? s.xs[i] < y1 : s.xs[i] <= y1;
              bool iny = (side & 2) ? s.ys[i] < y2 : s.ys[i] <= y2;
              if (inx && iny) mass += s.weights[i];
            }
            best = std::max(best, std::fabs(mass / s.norm - y1 * y2));
          }
        }
      }
      CHECK(std::fabs(star_discrepancy(s) - best) < 1e-12);
    }
  }

  SECTION("caps are enforced") {
    WeightedSample s;
    s.dim = 2;
    s.xs.assign(5001, 0.5);
    s.ys.assign(5001, 0.5);
    s.weights.assign(5001, 1.0);
    s.norm = 1.0;
    CHECK_THROWS_WITH(star_discrepancy(s),
                      Catch::Matchers::ContainsSubstring("subsample"));
  }
}

TEST_CASE("adding a point moves d* by at most its normalized weight",
          "[discrepancy]") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> pts(200), ws(200, 1.0);
    for (auto& p : pts) p = oracle::uniform01(rng);
    WeightedSample s;
    s.dim = 1;
    s.xs = pts;
    s.weights = ws;
    s.norm = 220.0;
    double before = star_discrepancy(s);
    s.xs.push_back(oracle::uniform01(rng));
    s.weights.push_back(1.0);
    double after = star_discrepancy(s);
    CHECK(after <= before + 1.0 / s.norm + 1e-12);
    CHECK(after >= before - 1.0 / s.norm - 1e-12);
  }
}

TEST_CASE("erdos-turan bound", "[discrepancy]") {
  using Key = std::pair<int, int>;
  std::map<Key, std::complex<double>> corr;
  const int K = 9;
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      if (m1 || m2) corr[{m1, m2}] = 0.0;
  CHECK(std::fabs(erdos_turan_bound(corr, K, 10.0) - 0.1) < 1e-15);

  // constant orbit: raw sums are ~log x, bound must exceed 1
  double lx = std::log(1e6);
  for (auto& [k, v] : corr) v = lx;
  CHECK(erdos_turan_bound(corr, K, lx) >= 1.0);

  corr.erase({3, -2});
  CHECK_THROWS_WITH(erdos_turan_bound(corr, K, lx),
                    Catch::Matchers::ContainsSubstring("(3,-2)"));
  CHECK_THROWS_AS(erdos_turan_bound(corr, 0, lx), std::invalid_argument);
}

TEST_CASE("grid coverage", "[discrepancy]") {
  SECTION("constant orbit fills exactly one cell") {
    WeightedSample s;
    s.dim = 2;
    for (int n = 2; n <= 100; ++n) {
      s.xs.push_back(0.3);
      s.ys.push_back(0.6);
      s.weights.push_back(1.0 / n);
    }
    s.norm = std::log(100.0);
    auto rep = grid_coverage(s, 8);
    CHECK(rep.empty_cells.size() == 63);
    CHECK(rep.hits[rep.cell(2, 4)] == 99);
  }

  SECTION("masses sum to the sample's total log-mass") {
    std::mt19937_64 rng(31);
    WeightedSample s;
    s.dim = 2;
    for (int n = 2; n <= 2000; ++n) {
      s.xs.push_back(oracle::uniform01(rng));
      s.ys.push_back(oracle::uniform01(rng));
      s.weights.push_back(1.0 / n);
    }
    s.norm = std::log(2000.0);
    auto rep = grid_coverage(s, 5);
    CHECK(std::fabs(rep.total_mass - s.total_mass()) < 1e-9);
  }

  SECTION("streaming accumulator agrees with the materialized path") {
    std::mt19937_64 rng(32);
    WeightedSample s;
    s.dim = 2;
    GridAccumulator acc(6, std::log(500.0));
    for (int n = 2; n <= 500; ++n) {
      double x = oracle::uniform01(rng), y = oracle::uniform01(rng);
      s.xs.push_back(x);
      s.ys.push_back(y);
      s.weights.push_back(1.0 / n);
      acc.add(x, y, 1.0 / n);
    }
    s.norm = std::log(500.0);
    auto a = grid_coverage(s, 6);
    auto b = acc.report();
    CHECK(a.mass == b.mass);
    CHECK(a.hits == b.hits);
  }
  CHECK_THROWS_AS(GridAccumulator(1, 1.0), std::invalid_argument);
}
