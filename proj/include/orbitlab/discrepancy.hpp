#pragma once

// Logarithmic discrepancy D_N and anchored discrepancy D_N* for weighted
// point sets on T and T^2, the Erdos-Turan style bound assembled from
// twisted correlation sums, and grid-coverage reports for orbit scans.
//
// Arcs/boxes here are images of intervals [a,b] with 0 <= a <= b <= 1
// (anchored boxes have a = 0); wrap-around arcs are outside the sup.  With
// log-weighted mass != 1 a wrapped arc picks up a |mass - 1| term and only
// D <= 3 D* holds; over interval arcs every deviation is a difference of
// two anchored one-sided deviations, so D* <= D <= 2^d D* is an identity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitlab {

inline constexpr std::size_t kStarCap1d = 100'000;
inline constexpr std::size_t kStarCap2d = 5'000;

/// Weighted points on T^d, d in {1,2}.  Weight of the n-th orbit element is
/// 1/n and `norm` is the log-normalizer (log N); the normalized total mass
/// (sum w)/norm is close to, but not exactly, 1.
struct WeightedSample {
  int dim = 1;
  std::vector<double> xs;      // first coordinates in [0,1)
  std::vector<double> ys;      // second coordinates (d = 2 only)
  std::vector<double> weights; // positive
  double norm = 1.0;           // > 0

  void validate() const {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("WeightedSample: dim must be 1 or 2");
    if (xs.size() != weights.size() || (dim == 2 && ys.size() != xs.size()))
      throw std::invalid_argument("WeightedSample: length mismatch");
    if (!(norm > 0.0)) throw std::invalid_argument("WeightedSample: norm <= 0");
  }

  [[nodiscard]] double total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s / norm;
  }
};

namespace detail {

// Anchored deviation profile in one dimension: the sorted list of values
// F(y) - y where F is the normalized mass of [0, y], evaluated one-sided at
// every data coordinate plus the y = 0 and y = 1 sentinels.  Discrepancies
// are sups over this profile.
struct AnchoredProfile {
  std::vector<double> devs;  // in y-order: 0, {open_i, closed_i}..., (mass-1)
  double d_star = 0.0;
  double witness = 0.0;

  AnchoredProfile(const std::vector<double>& xs,
                  const std::vector<double>& ws, double norm) {
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    devs.reserve(2 * xs.size() + 2);
    devs.push_back(0.0);  // y = 0, empty prefix
    double mass = 0.0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      double y = xs[idx[r]];
      track(mass / norm - y, y);
      mass += ws[idx[r]];
      track(mass / norm - y, y);
    }
    track(mass / norm - 1.0, 1.0);
  }

  void track(double dev, double y) {
    devs.push_back(dev);
    if (std::fabs(dev) > d_star) {
      d_star = std::fabs(dev);
      witness = y;
    }
  }
};

// O(M^2) corner scan for anchored boxes in d = 2: candidates at data
// coordinates, both one-sided values in both coordinates, plus the y = 1
// edges.  Records the extremal corner.
inline double star2_scan(const WeightedSample& s, double& wy1, double& wy2) {
  const std::size_t M = s.xs.size();
  std::vector<std::size_t> by_y(M), by_x(M);
  for (std::size_t i = 0; i < M; ++i) by_y[i] = by_x[i] = i;
  std::sort(by_y.begin(), by_y.end(),
            [&](std::size_t a, std::size_t b) { return s.ys[a] < s.ys[b]; });
  std::sort(by_x.begin(), by_x.end(),
            [&](std::size_t a, std::size_t b) { return s.xs[a] < s.xs[b]; });
  std::vector<std::size_t> yrank(M);
  for (std::size_t r = 0; r < M; ++r) yrank[by_y[r]] = r;

  std::vector<double> w_at_yrank(M, 0.0);
  double best = 0.0;
  wy1 = wy2 = 0.0;
  auto sweep = [&](double y1) {
    // sup over y2 with the current x-prefix loaded into w_at_yrank
    double mass = 0.0;
    auto consider = [&](double dev, double y2) {
      if (std::fabs(dev) > best) {
        best = std::fabs(dev);
        wy1 = y1;
        wy2 = y2;
      }
    };
    for (std::size_t r = 0; r < M; ++r) {
      double y2 = s.ys[by_y[r]];
      consider(mass / s.norm - y1 * y2, y2);  // open below y2
      mass += w_at_yrank[r];
      consider(mass / s.norm - y1 * y2, y2);  // closed at y2
    }
    consider(mass / s.norm - y1, 1.0);  // y2 = 1
  };

  std::size_t i = 0;
  while (i < M) {
    double x = s.xs[by_x[i]];
    sweep(x);  // y1 = x, box open at x (current prefix excludes x)
    while (i < M && s.xs[by_x[i]] == x) {
      w_at_yrank[yrank[by_x[i]]] = s.weights[by_x[i]];
      ++i;
    }
    sweep(x);  // closed at x
  }
  sweep(1.0);  // y1 = 1
  return best;
}

}  // namespace detail

struct DiscrepancyReport {
  double d_star = 0.0;
  double bound_lo = 0.0;              // = d_star
  double bound_hi = 0.0;              // = 2^d * d_star
  std::optional<double> exact_full;   // d = 1 and small samples only
  double witness_y1 = 0.0;            // extremal anchored box corner
  double witness_y2 = 0.0;
};

/// Anchored (star) discrepancy: sup over boxes prod [0, y_j] of
/// |mass - volume|, both one-sided values checked at every data coordinate.
inline double star_discrepancy(const WeightedSample& s) {
  s.validate();
  if (s.dim == 1) {
    if (s.xs.size() > kStarCap1d)
      throw std::invalid_argument(
          "star_discrepancy: more than 1e5 points in d=1; subsample first");
    return detail::AnchoredProfile(s.xs, s.weights, s.norm).d_star;
  }
  if (s.xs.size() > kStarCap2d)
    throw std::invalid_argument(
        "star_discrepancy: more than 5e3 points in d=2; subsample first");

  double wy1 = 0.0, wy2 = 0.0;
  return detail::star2_scan(s, wy1, wy2);
}

/// The interval [d_star, 2^d d_star] that must contain the full (all-arcs)
/// discrepancy, plus the exact d = 1 value when the sample is small enough
/// for the two-endpoint scan (M <= 1e4).  Every arc [a,b] deviation is the
/// difference of two anchored deviations, so the exact value is the range
/// of the anchored profile; the containment is then an identity even in
/// floating point.
inline DiscrepancyReport full_discrepancy_bound(const WeightedSample& s) {
  s.validate();
  DiscrepancyReport rep;
  if (s.dim == 1) {
    if (s.xs.size() > kStarCap1d)
      throw std::invalid_argument(
          "full_discrepancy_bound: more than 1e5 points in d=1; subsample first");
    detail::AnchoredProfile prof(s.xs, s.weights, s.norm);
    rep.d_star = prof.d_star;
    rep.witness_y1 = prof.witness;
    rep.bound_lo = prof.d_star;
    rep.bound_hi = 2.0 * prof.d_star;
    if (s.xs.size() <= 10'000) {
      auto [lo, hi] = std::minmax_element(prof.devs.begin(), prof.devs.end());
      rep.exact_full = *hi - *lo;
    }
    return rep;
  }
  if (s.xs.size() > kStarCap2d)
    throw std::invalid_argument(
        "full_discrepancy_bound: more than 5e3 points in d=2; subsample first");
  rep.d_star = detail::star2_scan(s, rep.witness_y1, rep.witness_y2);
  rep.bound_lo = rep.d_star;
  rep.bound_hi = 4.0 * rep.d_star;
  return rep;
}

/// Erdos-Turan style upper bound on the anchored discrepancy of the pair
/// orbit, from the raw log-weighted correlation sums
///   S(m1,m2) = sum_n f(n)^{m1} g(n+1)^{m2} / n:
///   1/(K+1) + (1/log_norm) * sum_{0<=|m1|,|m2|<=K, (m1,m2) != 0}
///                            |S(m1,m2)| / R(m1,m2),
/// R(m1,m2) = max(1,|m1|) max(1,|m2|).  Both implicit constants are taken
/// as 1; the relation to the measured D* is calibration-tested, never
/// asserted as sharp.
inline double erdos_turan_bound(
    const std::map<std::pair<int, int>, std::complex<double>>& correlations,
    int K, double log_norm) {
  if (K < 1) throw std::invalid_argument("erdos_turan_bound: K must be >= 1");
  if (!(log_norm > 0.0))
    throw std::invalid_argument("erdos_turan_bound: log_norm must be > 0");
  double sum = 0.0;
  for (int m1 = -K; m1 <= K; ++m1) {
    for (int m2 = -K; m2 <= K; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      auto it = correlations.find({m1, m2});
      if (it == correlations.end())
        throw std::invalid_argument("erdos_turan_bound: missing pair (" +
                                    std::to_string(m1) + "," +
                                    std::to_string(m2) + ")");
      double R = std::max(1, std::abs(m1)) *
                 static_cast<double>(std::max(1, std::abs(m2)));
      sum += std::abs(it->second) / R;
    }
  }
  return 1.0 / (K + 1.0) + sum / log_norm;
}

// ---------------------------------------------------------------------------
// Grid coverage ("dense at desk scale" operationalized)
// ---------------------------------------------------------------------------

struct CoverageReport {
  int G = 0;
  std::vector<double> mass;        // G*G normalized masses, row-major (ix*G+iy)
  std::vector<std::int64_t> hits;  // raw point counts per cell
  std::vector<std::pair<int, int>> empty_cells;
  double min_mass = 0.0;
  double max_mass = 0.0;
  double total_mass = 0.0;

  [[nodiscard]] std::size_t cell(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * G + iy;
  }
};

/// Streaming accumulator for G x G half-open cells [i/G,(i+1)/G) x ... ;
/// lets scans at large x feed coverage without materializing the sample.
class GridAccumulator {
 public:
  GridAccumulator(int G, double norm) : G_(G), norm_(norm) {
    if (G < 2) throw std::invalid_argument("GridAccumulator: G must be >= 2");
    if (!(norm > 0.0)) throw std::invalid_argument("GridAccumulator: norm <= 0");
    mass_.assign(static_cast<std::size_t>(G) * G, 0.0);
    hits_.assign(static_cast<std::size_t>(G) * G, 0);
  }

  void add(double x, double y, double w) {
    int ix = cell_index(x), iy = cell_index(y);
    mass_[static_cast<std::size_t>(ix) * G_ + iy] += w;
    hits_[static_cast<std::size_t>(ix) * G_ + iy] += 1;
  }

  [[nodiscard]] CoverageReport report() const {
    CoverageReport rep;
    rep.G = G_;
    rep.mass.resize(mass_.size());
    rep.hits = hits_;
    bool first = true;
    for (std::size_t c = 0; c < mass_.size(); ++c) {
      rep.mass[c] = mass_[c] / norm_;
      rep.total_mass += rep.mass[c];
      if (hits_[c] == 0)
        rep.empty_cells.emplace_back(static_cast<int>(c) / G_,
                                     static_cast<int>(c) % G_);
      if (first || rep.mass[c] < rep.min_mass) rep.min_mass = rep.mass[c];
      if (first || rep.mass[c] > rep.max_mass) rep.max_mass = rep.mass[c];
      first = false;
    }
    return rep;
  }

 private:
  [[nodiscard]] int cell_index(double v) const {
    int i = static_cast<int>(v * G_);
    if (i < 0) i = 0;
    if (i >= G_) i = G_ - 1;  // v == 1.0 cannot occur for angles in [0,1)
    return i;
  }

  int G_;
  double norm_;
  std::vector<double> mass_;
  std::vector<std::int64_t> hits_;
};

inline CoverageReport grid_coverage(const WeightedSample& s, int G) {
  s.validate();
  if (s.dim != 2) throw std::invalid_argument("grid_coverage: d must be 2");
  GridAccumulator acc(G, s.norm);
  for (std::size_t i = 0; i < s.xs.size(); ++i)
    acc.add(s.xs[i], s.ys[i], s.weights[i]);
  return acc.report();
}

/// 1-d coverage of a marginal (used by the scenario reports).
inline std::vector<std::int64_t> coverage_1d(const std::vector<double>& xs,
                                             int G) {
  if (G < 2) throw std::invalid_argument("coverage_1d: G must be >= 2");
  std::vector<std::int64_t> hits(G, 0);
  for (double v : xs) {
    int i = static_cast<int>(v * G);
    if (i >= G) i = G - 1;
    if (i < 0) i = 0;
    hits[static_cast<std::size_t>(i)] += 1;
  }
  return hits;
}

}  // namespace orbitlab
