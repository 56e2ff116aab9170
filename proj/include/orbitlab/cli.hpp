#pragma once

// Command-line front door.  Every subcommand resolves its full
// configuration up front, embeds it (with the library version) in the
// report, and writes JSON or CSV; identical configuration implies
// byte-identical output.  Exit codes: 0 success, 2 configuration error
// (message names the failing field), 3 reach/overflow (message names the
// offending parameter).

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbitlab/analysis.hpp"
#include "orbitlab/arith.hpp"
#include "orbitlab/beurling.hpp"
#include "orbitlab/discrepancy.hpp"
#include "orbitlab/multfunc.hpp"
#include "orbitlab/scenarios.hpp"
#include "orbitlab/serialize.hpp"
#include "orbitlab/sievecount.hpp"
#include "orbitlab/torus.hpp"
#include "orbitlab/version.hpp"

namespace orbitlab::cli {

struct FunctionPair {
  MultFnSpec f;
  MultFnSpec g;
  std::int64_t exp_f = 1;  // powered-orbit exponents (ratratio presets)
  std::int64_t exp_g = 1;
  Json desc = Json::object();
};

/// Named function-spec shorthands accepted wherever a spec is expected:
///   one          - the constant function 1
///   twist:<t>    - the Archimedean character n^{it}
///   random:<s>   - seeded random prime phases
///   chi:<q>:<i>  - extended Dirichlet character, canonical index i mod q
///   pseudo:<q>:<i>:<k> - pseudocharacter (k-th root of chi~)
/// anything starting with '{' parses as inline spec JSON, anything else as
/// a path to a spec JSON file.
inline MultFnSpec parse_spec_arg(const std::string& arg) {
  MultFnSpec fn;
  if (arg == "one") return fn;
  if (arg.rfind("twist:", 0) == 0) {
    fn.twist_t = std::stod(arg.substr(6));
    return fn;
  }
  if (arg.rfind("random:", 0) == 0)
    return random_phase_spec(std::stoull(arg.substr(7)));
  if (arg.rfind("chi:", 0) == 0 || arg.rfind("pseudo:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
    auto table = character_table(std::stoll(parts.at(1)));
    auto chi = table.at(std::stoul(parts.at(2)));
    if (parts[0] == "chi") {
      fn.base.rule = DirichletRule{chi};
    } else {
      fn.base.rule =
          PseudocharacterRule{make_pseudocharacter(chi, std::stoll(parts.at(3)))};
    }
    return fn;
  }
  if (!arg.empty() && arg.front() == '{')
    return spec_from_json(Json::parse(arg));
  std::ifstream in(arg);
  if (!in)
    throw std::invalid_argument("function spec: file not found: " + arg);
  Json j;
  in >> j;
  return spec_from_json(j);
}

inline FunctionPair resolve_preset(const std::string& name) {
  FunctionPair pair;
  if (name == "counterexample-i") {
    auto [f, g] = counterexample_i(2, 2, 1.0);
    pair.f = f;
    pair.g = g;
  } else if (name == "counterexample-ii") {
    auto [f, g] = counterexample_ii(
        2, Angle::real_angle(quad_irrational_sqrt2()),
        Angle::real_angle(quad_irrational_sqrt3()));
    pair.f = f;
    pair.g = g;
  } else if (name == "ratratio-rational") {
    auto fam = ratratio_family(2, 3, 1, 2, 2.0);
    pair.f = fam.f;
    pair.g = fam.g;
    pair.exp_f = fam.exp_f;
    pair.exp_g = fam.exp_g;
  } else if (name == "ratratio-irrational") {
    pair.f.twist_t = std::sqrt(2.0) * kTwoPi;
    pair.g.twist_t = kTwoPi;
  } else if (name == "random-phase") {
    pair.f = random_phase_spec(1001);
    pair.g = random_phase_spec(2002);
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  pair.desc = Json{{"preset", name},
                 {"f", spec_to_json(pair.f)},
                 {"g", spec_to_json(pair.g)},
                 {"exp_f", pair.exp_f},
                 {"exp_g", pair.exp_g}};
  return pair;
}

namespace detail {

// CLI prime-table cap: scans beyond x ~ 2e7 would need segmented sieving,
// which is out of scope; parameters that ask for more exit with code 3.
inline constexpr std::int64_t kCliTableCap = 20'000'002;

inline SpfTable make_table(std::int64_t needed, const char* param) {
  if (needed > kCliTableCap)
    throw reach_error(std::string(param) +
                      ": requires a prime table beyond the 2e7 cap");
  return SpfTable(std::max<std::int64_t>(needed, 3));
}

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(std::ostream& fallback, const std::string& payload) const {
    if (path.empty()) {
      fallback << payload;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("--out: cannot open " + path);
    out << payload;
  }
};

inline std::vector<std::int64_t> parse_grid(const std::string& grid,
                                            std::int64_t single) {
  std::vector<std::int64_t> xs;
  if (!grid.empty()) {
    std::stringstream ss(grid);
    std::string piece;
    while (std::getline(ss, piece, ','))
      xs.push_back(static_cast<std::int64_t>(std::stod(piece)));
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] <= xs[i - 1])
        throw std::invalid_argument("--x-grid: must be strictly increasing");
  } else {
    xs.push_back(single);
  }
  return xs;
}

inline FunctionPair resolve_pair(const std::string& preset,
                                 const std::string& f_arg,
                                 const std::string& g_arg) {
  if (!preset.empty()) return resolve_preset(preset);
  if (f_arg.empty() || g_arg.empty())
    throw std::invalid_argument("need --preset or both --f and --g");
  FunctionPair pair;
  pair.f = parse_spec_arg(f_arg);
  pair.g = parse_spec_arg(g_arg);
  pair.desc = Json{{"preset", nullptr},
                 {"f", spec_to_json(pair.f)},
                 {"g", spec_to_json(pair.g)},
                 {"exp_f", 1},
                 {"exp_g", 1}};
  return pair;
}

inline Json coverage_to_json(const CoverageReport& rep) {
  Json cells = Json::array();
  for (int i = 0; i < rep.G; ++i) {
    Json row = Json::array();
    for (int j = 0; j < rep.G; ++j) row.push_back(rep.mass[rep.cell(i, j)]);
    cells.push_back(row);
  }
  Json empties = Json::array();
  for (auto [i, j] : rep.empty_cells) empties.push_back(Json::array({i, j}));
  return Json{{"G", rep.G},
              {"cell_mass", cells},
              {"empty_cells", empties},
              {"empty_count", empties.size()},
              {"min_mass", rep.min_mass},
              {"max_mass", rep.max_mass},
              {"total_mass", rep.total_mass}};
}

}  // namespace detail

/// Entry point; argv excludes the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"orbitlab - numerical laboratory for orbits of multiplicative pairs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // ---- shared state filled by subcommand options --------------------------
  std::string preset, f_arg, g_arg, x_grid, out_path, format = "json";
  double x_raw = 100000;  // double so that 1e6-style values parse
  detail::OutputTarget target;

  auto add_common = [&](CLI::App* cmd, bool with_pair) {
    cmd->add_option("--out", out_path, "output file (default stdout)");
    cmd->add_option("--format", format, "json|csv");
    if (with_pair) {
      cmd->add_option("--preset", preset,
                      "counterexample-i|counterexample-ii|ratratio-rational|"
                      "ratratio-irrational|random-phase");
      cmd->add_option("--f", f_arg, "first function spec");
      cmd->add_option("--g", g_arg, "second function spec");
    }
  };

  std::string payload;

  // ---- sieve ---------------------------------------------------------------
  auto* sieve = app.add_subcommand("sieve", "Phi_{N,B}(x;q,a), delta, residual");
  std::int64_t sv_N = 3, sv_B = 2, sv_q = 1, sv_a = 0;
  sieve->add_option("--N", sv_N);
  sieve->add_option("--B", sv_B);
  sieve->add_option("--q", sv_q);
  sieve->add_option("--a", sv_a);
  sieve->add_option("--x", x_raw);
  sieve->add_option("--x-grid", x_grid, "comma-separated, strictly increasing");
  add_common(sieve, false);
  sieve->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto xs = detail::parse_grid(x_grid, x);
    SieveParams params{sv_N, sv_B, sv_q, sv_a};
    SpfTable table = detail::make_table(std::max<std::int64_t>(sv_N + 1, xs.back()) + 1, "--x");
    Json rows = Json::array();
    std::ostringstream csv;
    CsvWriter w(csv);
    w.row({"x", "count", "delta", "residual"});
    Rational d = delta_density(params);
    for (auto xv : xs) {
      std::int64_t cnt = phi_count(params, xv, table);
      double resid = triv_residual(params, xv, table);
      rows.push_back(Json{{"x", xv}, {"count", cnt}, {"residual", resid}});
      w.row({std::to_string(xv), std::to_string(cnt),
             std::to_string(d.num) + "/" + std::to_string(d.den),
             csv_double(resid)});
    }
    Json config{{"N", sv_N}, {"B", sv_B}, {"q", sv_q}, {"a", sv_a},
                {"x_grid", xs}};
    if (format == "csv") {
      payload = csv.str();
    } else {
      Json res{{"delta", std::to_string(d.num) + "/" + std::to_string(d.den)},
               {"delta_value", d.value()},
               {"rows", rows}};
      payload = make_report("sieve", config, res).dump(2) + "\n";
    }
  });

  // ---- levelset --------------------------------------------------------------
  auto* level = app.add_subcommand("levelset", "sieved level-set masses");
  std::int64_t lv_N = 3, lv_B = 4, lv_q = 1, lv_a = 0;
  std::string lv_h1 = "one", lv_h2 = "one", lv_alpha = "0/1", lv_beta = "0/1";
  double lv_arc_center = 0.0, lv_arc_half = 0.0, lv_arc_u = 0.0;
  double lv_arc2_center = 0.0, lv_arc2_half = 0.0, lv_arc2_v = 0.0;
  bool lv_members = false;
  level->add_option("--N", lv_N);
  level->add_option("--B", lv_B);
  level->add_option("--q", lv_q);
  level->add_option("--a", lv_a);
  level->add_option("--h1", lv_h1);
  level->add_option("--h2", lv_h2);
  level->add_option("--alpha", lv_alpha, "rational angle a/b");
  level->add_option("--beta", lv_beta);
  level->add_option("--arc-center", lv_arc_center);
  level->add_option("--arc-half", lv_arc_half, "enables the arc when > 0");
  level->add_option("--arc-u", lv_arc_u);
  level->add_option("--arc2-center", lv_arc2_center);
  level->add_option("--arc2-half", lv_arc2_half, "second arc, for n^{iv}");
  level->add_option("--arc2-v", lv_arc2_v);
  level->add_option("--x", x_raw);
  level->add_option("--x-grid", x_grid);
  level->add_flag("--members", lv_members, "include the member list");
  add_common(level, false);
  level->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto xs = detail::parse_grid(x_grid, x);
    LevelSetQuery query;
    query.params = SieveParams{lv_N, lv_B, lv_q, lv_a};
    query.h1 = parse_spec_arg(lv_h1);
    query.h2 = parse_spec_arg(lv_h2);
    query.alpha = angle_from_json(Json(lv_alpha));
    query.beta = angle_from_json(Json(lv_beta));
    if (lv_arc_half > 0.0)
      query.arc_I = ArcCondition{Arc(Angle::real_angle(lv_arc_center),
                                     lv_arc_half),
                                 lv_arc_u};
    if (lv_arc2_half > 0.0)
      query.arc_J = ArcCondition{Arc(Angle::real_angle(lv_arc2_center),
                                     lv_arc2_half),
                                 lv_arc2_v};
    SpfTable table = detail::make_table(xs.back() + 1, "--x");
    Json rows = Json::array();
    std::ostringstream csv;
    CsvWriter w(csv);
    w.row({"x", "logmass", "count"});
    for (auto xv : xs) {
      auto members = levelset_members(query, xv, table);
      double mass = 0.0;
      for (auto it = members.rbegin(); it != members.rend(); ++it)
        mass += 1.0 / static_cast<double>(*it);
      mass /= std::log(static_cast<double>(xv));
      Json row{{"x", xv}, {"logmass", mass}, {"count", members.size()}};
      if (lv_members && xv == xs.back()) row["members"] = members;
      rows.push_back(row);
      w.row({std::to_string(xv), csv_double(mass),
             std::to_string(members.size())});
    }
    Json config{{"N", lv_N}, {"B", lv_B}, {"q", lv_q}, {"a", lv_a},
                {"h1", spec_to_json(query.h1)}, {"h2", spec_to_json(query.h2)},
                {"alpha", lv_alpha}, {"beta", lv_beta},
                {"arc_half", lv_arc_half}, {"arc_center", lv_arc_center},
                {"arc_u", lv_arc_u}, {"arc2_half", lv_arc2_half},
                {"arc2_center", lv_arc2_center}, {"arc2_v", lv_arc2_v},
                {"x_grid", xs}};
    payload = format == "csv"
                  ? csv.str()
                  : make_report("levelset", config, Json{{"rows", rows}})
                            .dump(2) + "\n";
  });

  // ---- beurling --------------------------------------------------------------
  auto* beur = app.add_subcommand("beurling", "Beurling polynomial coefficients");
  int bk_K = 9;
  double bk_a = -1.0, bk_b = -1.0;
  std::string bk_kind = "sawtooth";
  bool bk_coeffs = false;
  beur->add_option("--K", bk_K);
  beur->add_flag("--coeffs", bk_coeffs, "emit the coefficient table (CSV)");
  beur->add_option("--kind", bk_kind, "sawtooth|majorant|minorant");
  beur->add_option("--a", bk_a, "interval left endpoint");
  beur->add_option("--b", bk_b, "interval right endpoint");
  add_common(beur, false);
  beur->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    TrigPolynomial poly(1);
    bool degenerate = false;
    if (bk_kind == "sawtooth") {
      poly = beurling_polynomial(bk_K);
    } else if (bk_kind == "majorant") {
      poly = interval_majorant(bk_K, bk_a, bk_b);
    } else if (bk_kind == "minorant") {
      auto res = interval_minorant(bk_K, bk_a, bk_b);
      poly = res.poly;
      degenerate = res.degenerate_width;
    } else {
      throw std::invalid_argument("--kind: sawtooth|majorant|minorant");
    }
    std::ostringstream csv;
    CsvWriter w(csv);
    w.row({"m", "re", "im"});
    Json coeffs = Json::array();
    for (int m = -poly.degree; m <= poly.degree; ++m) {
      w.row({std::to_string(m), csv_double(poly.coeff(m).real()),
             csv_double(poly.coeff(m).imag())});
      coeffs.push_back(Json{{"m", m},
                            {"re", poly.coeff(m).real()},
                            {"im", poly.coeff(m).imag()}});
    }
    Json config{{"K", bk_K}, {"kind", bk_kind}, {"a", bk_a}, {"b", bk_b}};
    if (format == "csv" || bk_coeffs) {
      payload = csv.str();
    } else {
      Json res{{"mean", poly.coeff(0).real()},
               {"degenerate_width", degenerate},
               {"coefficients", coeffs}};
      payload = make_report("beurling", config, res).dump(2) + "\n";
    }
  });

  // ---- distance --------------------------------------------------------------
  auto* dist = app.add_subcommand("distance", "pretentious distance sweep");
  std::int64_t ds_Nlow = 0;
  dist->add_option("--N-low", ds_Nlow);
  dist->add_option("--x", x_raw);
  dist->add_option("--x-grid", x_grid);
  add_common(dist, true);
  dist->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    auto xs = detail::parse_grid(x_grid, x);
    SpfTable table = detail::make_table(xs.back() + 1, "--x");
    Json rows = Json::array();
    std::ostringstream csv;
    CsvWriter w(csv);
    w.row({"x", "dist_sq"});
    for (auto xv : xs) {
      auto res = pretentious_distance_sq(pair.f, pair.g, ds_Nlow, xv, table);
      rows.push_back(Json{{"x", xv},
                          {"dist_sq", res.squared_distance},
                          {"prime_terms", res.prime_terms}});
      w.row({std::to_string(xv), csv_double(res.squared_distance)});
    }
    Json config{{"pair", pair.desc}, {"N_low", ds_Nlow}, {"x_grid", xs}};
    payload = format == "csv"
                  ? csv.str()
                  : make_report("distance", config, Json{{"rows", rows}})
                            .dump(2) + "\n";
  });

  // ---- correlation -----------------------------------------------------------
  auto* corr = app.add_subcommand("correlation", "binary correlation sweep");
  std::int64_t co_a1 = 1, co_b1 = 0, co_a2 = 1, co_b2 = 1;
  corr->add_option("--a1", co_a1);
  corr->add_option("--b1", co_b1);
  corr->add_option("--a2", co_a2);
  corr->add_option("--b2", co_b2);
  corr->add_option("--x", x_raw);
  corr->add_option("--x-grid", x_grid);
  add_common(corr, true);
  corr->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    auto xs = detail::parse_grid(x_grid, x);
    std::int64_t top = std::max(co_a1 * xs.back() + co_b1,
                                co_a2 * xs.back() + co_b2);
    SpfTable table = detail::make_table(top + 1, "--x / linear forms");
    Json rows = Json::array();
    std::ostringstream csv;
    CsvWriter w(csv);
    w.row({"x", "re", "im"});
    for (auto xv : xs) {
      auto res = binary_correlation(pair.f, pair.g, co_a1, co_b1, co_a2, co_b2,
                                    xv, table);
      Json row{{"x", xv}, {"re", res.value.real()}, {"im", res.value.imag()},
               {"abs", std::abs(res.value)}};
      if (res.degenerate_forms) row["degenerate_forms"] = true;
      rows.push_back(row);
      w.row({std::to_string(xv), csv_double(res.value.real()),
             csv_double(res.value.imag())});
    }
    Json config{{"pair", pair.desc},
                {"forms", Json::array({co_a1, co_b1, co_a2, co_b2})},
                {"x_grid", xs}};
    payload = format == "csv"
                  ? csv.str()
                  : make_report("correlation", config, Json{{"rows", rows}})
                            .dump(2) + "\n";
  });

  // ---- scan ------------------------------------------------------------------
  auto* scan = app.add_subcommand("scan", "materialize the weighted pair orbit");
  std::string sc_dir = "forward";
  scan->add_option("--x", x_raw);
  scan->add_option("--direction", sc_dir, "forward|backward");
  add_common(scan, true);
  scan->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    ShiftDirection dir = sc_dir == "backward" ? ShiftDirection::backward
                                              : ShiftDirection::forward;
    SpfTable table = detail::make_table(x + 2, "--x");
    auto sc = orbit_scan(pair.f, pair.g, x, dir, table);
    Json config{{"pair", pair.desc}, {"x", x}, {"direction", sc_dir}};
    if (format == "csv") {
      std::ostringstream csv;
      CsvWriter w(csv);
      w.row({"n", "first", "second", "weight"});
      for (std::size_t i = 0; i < sc.sample.xs.size(); ++i)
        w.row({std::to_string(i + 2), csv_double(sc.sample.xs[i]),
               csv_double(sc.sample.ys[i]), csv_double(sc.sample.weights[i])});
      payload = csv.str();
    } else {
      Json res{{"points", sc.sample.xs.size()},
               {"total_mass", sc.sample.total_mass()},
               {"norm", sc.sample.norm}};
      payload = make_report("scan", config, res).dump(2) + "\n";
    }
  });

  // ---- coverage ----------------------------------------------------------------
  auto* cover = app.add_subcommand("coverage", "G x G cell coverage of the orbit");
  int cv_G = 8;
  std::int64_t cv_expf = 0, cv_expg = 0;  // 0 = use preset exponents
  cover->add_option("--x", x_raw);
  cover->add_option("--grid", cv_G);
  cover->add_option("--exp-f", cv_expf, "power applied to f (default preset)");
  cover->add_option("--exp-g", cv_expg);
  add_common(cover, true);
  cover->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    std::int64_t ef = cv_expf > 0 ? cv_expf : pair.exp_f;
    std::int64_t eg = cv_expg > 0 ? cv_expg : pair.exp_g;
    SpfTable table(std::min<std::int64_t>(x + 2, detail::kCliTableCap));
    auto rep = orbit_coverage_streaming(pair.f, pair.g, x, cv_G, table, ef, eg);
    Json config{{"pair", pair.desc}, {"x", x}, {"grid", cv_G},
                {"exp_f", ef}, {"exp_g", eg}};
    payload = make_report("coverage", config, detail::coverage_to_json(rep))
                  .dump(2) + "\n";
  });

  // ---- discrepancy ---------------------------------------------------------
  auto* disc = app.add_subcommand("discrepancy", "anchored discrepancy of the orbit");
  disc->add_option("--x", x_raw);
  add_common(disc, true);
  disc->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    std::int64_t used = std::min<std::int64_t>(
        x, static_cast<std::int64_t>(kStarCap2d) + 1);
    SpfTable table = detail::make_table(used + 2, "--x");
    auto sc = orbit_scan(pair.f, pair.g, used, ShiftDirection::forward, table);
    auto rep = full_discrepancy_bound(sc.sample);
    Json config{{"pair", pair.desc}, {"x", x}, {"x_used", used}};
    Json res{{"d_star", rep.d_star},
             {"bound_lo", rep.bound_lo},
             {"bound_hi", rep.bound_hi},
             {"witness_y1", rep.witness_y1},
             {"witness_y2", rep.witness_y2}};
    payload = make_report("discrepancy", config, res).dump(2) + "\n";
  });

  // ---- et-bound --------------------------------------------------------------
  auto* et = app.add_subcommand("et-bound", "Erdos-Turan style discrepancy bound");
  int et_K = 8;
  et->add_option("--K", et_K);
  et->add_option("--x", x_raw);
  add_common(et, true);
  et->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    auto pair = detail::resolve_pair(preset, f_arg, g_arg);
    SpfTable table = detail::make_table(x + 2, "--x");
    auto grid = correlation_grid(pair.f, pair.g, et_K, x, table);
    double lx = std::log(static_cast<double>(x));
    double bound = erdos_turan_bound(grid, et_K, lx);
    Json mags = Json::array();
    for (const auto& [key, val] : grid)
      mags.push_back(Json{{"m1", key.first},
                          {"m2", key.second},
                          {"abs_norm", std::abs(val) / lx}});
    Json config{{"pair", pair.desc}, {"K", et_K}, {"x", x}};
    Json res{{"bound", bound}, {"correlations", mags}};
    payload = make_report("et-bound", config, res).dump(2) + "\n";
  });

  // ---- counterexample --------------------------------------------------------
  auto* cex = app.add_subcommand("counterexample", "family (i)/(ii) experiments");
  std::string cx_family = "ii";
  std::int64_t cx_k = 2, cx_l = 2, cx_p = 2;
  double cx_t = 1.0;
  int cx_G = 8;
  cex->add_option("--family", cx_family, "i|ii");
  cex->add_option("--order-k", cx_k);
  cex->add_option("--order-l", cx_l);
  cex->add_option("--t", cx_t);
  cex->add_option("--p", cx_p, "exceptional prime (family ii)");
  cex->add_option("--x", x_raw);
  cex->add_option("--grid", cx_G);
  add_common(cex, false);
  cex->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    SpfTable table = detail::make_table(x + 2, "--x");
    Json config{{"family", cx_family}, {"x", x}, {"grid", cx_G}};
    Json res;
    if (cx_family == "i") {
      auto [f, g] = counterexample_i(cx_k, cx_l, cx_t);
      config["order_k"] = cx_k;
      config["order_l"] = cx_l;
      config["t"] = cx_t;
      config["f"] = spec_to_json(f);
      config["g"] = spec_to_json(g);
      double maxdev = 0.0;
      std::int64_t idbound = std::min<std::int64_t>(x, 10'000);
      for (std::int64_t n = 1; n <= idbound; ++n) {
        double d = circ_dist(eval(f, table, n).scaled(cx_k),
                             archimedean_angle(n, cx_k * cx_t));
        maxdev = std::max(maxdev, d);
      }
      auto rep = orbit_coverage_streaming(f, g, x, cx_G, table);
      std::vector<double> mf, mg;
      mf.reserve(x - 1);
      mg.reserve(x - 1);
      for (std::int64_t n = 2; n <= x; ++n) {
        mf.push_back(eval(f, table, n).value());
        mg.push_back(eval(g, table, n + 1).value());
      }
      auto hf = coverage_1d(mf, 2 * cx_G);
      auto hg = coverage_1d(mg, 2 * cx_G);
      std::int64_t e1 = std::count(hf.begin(), hf.end(), 0);
      std::int64_t e2 = std::count(hg.begin(), hg.end(), 0);
      res = Json{{"power_identity_max_dev", maxdev},
                 {"identity_bound_n", idbound},
                 {"coverage", detail::coverage_to_json(rep)},
                 {"marginal_empty_f", e1},
                 {"marginal_empty_g", e2},
                 {"marginal_grid", 2 * cx_G}};
    } else {
      auto [f, g] = counterexample_ii(
          cx_p, Angle::real_angle(quad_irrational_sqrt2()),
          Angle::real_angle(quad_irrational_sqrt3()));
      config["p"] = cx_p;
      config["f"] = spec_to_json(f);
      config["g"] = spec_to_json(g);
      std::int64_t violations = 0;
      for (std::int64_t n = 2; n <= x; ++n) {
        bool f_nontrivial = !eval(f, table, n).is_zero() &&
                            eval(f, table, n).value() != 0.0;
        bool g_trivial = eval(g, table, n + 1).value() == 0.0;
        if (f_nontrivial && !g_trivial) ++violations;
      }
      auto rep = orbit_coverage_streaming(f, g, x, cx_G, table);
      std::int64_t off_cross_empty = 0, on_cross_empty = 0;
      for (auto [i, j] : rep.empty_cells)
        (i == 0 || j == 0) ? ++on_cross_empty : ++off_cross_empty;
      res = Json{{"structural_violations", violations},
                 {"coverage", detail::coverage_to_json(rep)},
                 {"off_cross_empty", off_cross_empty},
                 {"on_cross_empty", on_cross_empty}};
    }
    payload = make_report("counterexample", config, res).dump(2) + "\n";
  });

  // ---- ratratio -----------------------------------------------------------
  auto* rat = app.add_subcommand("ratratio", "twist-ratio dichotomy experiments");
  std::string rr_mode = "rational";
  std::int64_t rr_k = 2, rr_l = 3, rr_r1 = 1, rr_s1 = 2;
  double rr_tp = 2.0;
  int rr_G = 8;
  rat->add_option("--mode", rr_mode, "rational|irrational");
  rat->add_option("--k", rr_k);
  rat->add_option("--l", rr_l);
  rat->add_option("--r1", rr_r1);
  rat->add_option("--s1", rr_s1);
  rat->add_option("--t-prime", rr_tp);
  rat->add_option("--x", x_raw);
  rat->add_option("--grid", rr_G);
  add_common(rat, false);
  rat->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    SpfTable table(std::min<std::int64_t>(x + 2, detail::kCliTableCap));
    Json config{{"mode", rr_mode}, {"k", rr_k}, {"l", rr_l}, {"r1", rr_r1},
                {"s1", rr_s1}, {"t_prime", rr_tp}, {"x", x}, {"grid", rr_G}};
    Json res;
    if (rr_mode == "rational") {
      auto fam = ratratio_family(rr_k, rr_l, rr_r1, rr_s1, rr_tp);
      config["f"] = spec_to_json(fam.f);
      config["g"] = spec_to_json(fam.g);
      config["exp_f"] = fam.exp_f;
      config["exp_g"] = fam.exp_g;
      std::int64_t violations = 0;
      double max_ratio = 0.0;
      for (std::int64_t n = 2; n <= x; ++n) {
        Angle a = eval(fam.f, table, n).scaled(fam.exp_f);
        Angle b = eval(fam.g, table, n + 1).scaled(fam.exp_g);
        double diag = std::abs(circle_value(a) - circle_value(b));
        double bound_n = std::fabs(fam.u) / static_cast<double>(n);
        if (diag > bound_n) ++violations;
        max_ratio = std::max(max_ratio, diag / bound_n);
      }
      res = Json{{"u", fam.u},
                 {"diagonal_violations", violations},
                 {"max_ratio_to_bound", max_ratio}};
    } else if (rr_mode == "irrational") {
      MultFnSpec f, g;
      f.twist_t = std::sqrt(2.0) * rr_tp;
      g.twist_t = rr_tp;
      config["f"] = spec_to_json(f);
      config["g"] = spec_to_json(g);
      auto rep = orbit_coverage_streaming(f, g, x, rr_G, table);
      res = Json{{"coverage", detail::coverage_to_json(rep)}};
    } else {
      throw std::invalid_argument("--mode: rational|irrational");
    }
    payload = make_report("ratratio", config, res).dump(2) + "\n";
  });

  // ---- kronecker -----------------------------------------------------------
  auto* kron = app.add_subcommand("kronecker", "inhomogeneous approximation search");
  std::vector<double> kr_alphas;
  std::vector<std::string> kr_targets;
  double kr_eta = 0.01;
  std::int64_t kr_M = 100000, kr_k = 1;
  bool kr_accel = false;
  kron->add_option("--alpha", kr_alphas, "1 or 2 real angles")->expected(1, 2);
  kron->add_option("--target", kr_targets, "matching targets (a/b or float)")
      ->expected(1, 2);
  kron->add_option("--eta", kr_eta);
  kron->add_option("--M", kr_M);
  kron->add_option("--k", kr_k);
  kron->add_flag("--accelerated", kr_accel);
  add_common(kron, false);
  kron->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    KroneckerQuery query;
    query.alphas = kr_alphas;
    for (const auto& t : kr_targets) {
      if (t.find('/') != std::string::npos)
        query.targets.push_back(angle_from_json(Json(t)));
      else
        query.targets.push_back(Angle::real_angle(std::stod(t)));
    }
    query.eta = kr_eta;
    query.M = kr_M;
    query.k = kr_k;
    auto m = kronecker_search(query, kr_accel);
    Json config{{"alphas", kr_alphas}, {"targets", kr_targets},
                {"eta", kr_eta}, {"M", kr_M}, {"k", kr_k},
                {"accelerated", kr_accel}};
    Json res{{"found", m.has_value()}};
    if (m) res["m"] = *m;
    payload = make_report("kronecker", config, res).dump(2) + "\n";
  });

  // ---- concentration ---------------------------------------------------------
  auto* conc = app.add_subcommand("concentration", "1-pretentious concentration diagnostic");
  std::string cc_f = "one";
  std::int64_t cc_N = 5, cc_B = 2;
  bool cc_shift = false;
  conc->add_option("--f", cc_f);
  conc->add_option("--N", cc_N);
  conc->add_option("--B", cc_B);
  conc->add_option("--x", x_raw);
  conc->add_flag("--shifted", cc_shift, "evaluate f(Bn+1) instead of f(n)");
  add_common(conc, false);
  conc->callback([&] {
    const std::int64_t x = static_cast<std::int64_t>(x_raw);
    MultFnSpec f = parse_spec_arg(cc_f);
    SpfTable table = detail::make_table(x + 2, "--x");
    auto rep = concentration_diagnostic(f, cc_N, cc_B, x, table, cc_shift);
    Json config{{"f", spec_to_json(f)}, {"N", cc_N}, {"B", cc_B}, {"x", x},
                {"shifted", cc_shift}};
    Json res{{"lhs", rep.lhs},
             {"phi", rep.phi},
             {"dist_sq", rep.dist_sq},
             {"inv_N", rep.inv_N},
             {"smooth_tail", rep.smooth_tail},
             {"drift", rep.drift},
             {"rhs", rep.rhs},
             {"ratio", rep.ratio}};
    payload = make_report("concentration", config, res).dump(2) + "\n";
  });

  // ---- parse and dispatch ---------------------------------------------------
  try {
    std::vector<std::string> given = argv;
    // experiment config document: {"command": "...", "flags": {"--N": 3, ...}}
    if (!given.empty() && given[0] == "--config") {
      if (given.size() < 2)
        throw std::invalid_argument("--config: missing file path");
      std::ifstream in(given[1]);
      if (!in)
        throw std::invalid_argument("--config: file not found: " + given[1]);
      Json j;
      in >> j;
      std::vector<std::string> expanded{j.at("command").get<std::string>()};
      for (const auto& [key, val] : j.at("flags").items()) {
        expanded.push_back(key);
        if (val.is_boolean()) {
          if (!val.get<bool>()) expanded.pop_back();
        } else if (val.is_string()) {
          expanded.push_back(val.get<std::string>());
        } else {
          expanded.push_back(val.dump());
        }
      }
      expanded.insert(expanded.end(), given.begin() + 2, given.end());
      given = std::move(expanded);
    }
    std::vector<std::string> args(given.rbegin(), given.rend());
    app.parse(args);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const reach_error& e) {
    err << "reach exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  }

  target.path = out_path;
  target.write(out, payload);
  return 0;
}

}  // namespace orbitlab::cli
