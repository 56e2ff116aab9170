#pragma once

// JSON serialization of function specs and experiment reports, plus the CSV
// writer.  Rational angles round-trip losslessly as "a/b" strings; real
// angles as doubles (nlohmann emits shortest-round-trip decimal, so parsing
// recovers the exact bits).  Reports use ordered_json throughout: identical
// config + seed must produce byte-identical output.

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "orbitlab/multfunc.hpp"
#include "orbitlab/torus.hpp"
#include "orbitlab/version.hpp"

namespace orbitlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Angles
// ---------------------------------------------------------------------------

inline Json angle_to_json(const Angle& a) {
  if (a.is_rational())
    return std::to_string(a.num) + "/" + std::to_string(a.den);
  return a.real;
}

inline Angle angle_from_json(const Json& j) {
  if (j.is_number()) return Angle::real_angle(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("angle: expected \"a/b\" or a number");
    return Angle::rational(std::stoll(s.substr(0, slash)),
                           std::stoll(s.substr(slash + 1)));
  }
  throw std::invalid_argument("angle: expected \"a/b\" or a number");
}

// ---------------------------------------------------------------------------
// Base rules and specs
// ---------------------------------------------------------------------------

inline Json base_rule_to_json(const BaseRule& rule) {
  struct Visitor {
    Json operator()(const ConstantRule& r) const {
      return Json{{"type", "constant"}, {"angle", angle_to_json(r.angle)}};
    }
    Json operator()(const DirichletRule& r) const {
      return Json{{"type", "dirichlet"},
                  {"modulus", r.chi.modulus()},
                  {"index", character_index(r.chi)}};
    }
    Json operator()(const PseudocharacterRule& r) const {
      return Json{{"type", "pseudocharacter"},
                  {"modulus", r.h.chi.modulus()},
                  {"index", character_index(r.h.chi)},
                  {"k", r.h.k}};
    }
    Json operator()(const RandomPhaseRule& r) const {
      return Json{{"type", "random-phase"}, {"seed", r.seed}};
    }
    Json operator()(const ProductRule& r) const {
      Json factors = Json::array();
      for (const auto& f : r.factors) factors.push_back(base_rule_to_json(f));
      return Json{{"type", "product"}, {"factors", factors}};
    }
  };
  return std::visit(Visitor{}, rule.rule);
}

inline BaseRule base_rule_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  BaseRule rule;
  if (type == "constant") {
    rule.rule = ConstantRule{angle_from_json(j.at("angle"))};
  } else if (type == "dirichlet") {
    auto table = character_table(j.at("modulus").get<std::int64_t>());
    rule.rule = DirichletRule{table.at(j.at("index").get<std::size_t>())};
  } else if (type == "pseudocharacter") {
    auto table = character_table(j.at("modulus").get<std::int64_t>());
    rule.rule = PseudocharacterRule{
        make_pseudocharacter(table.at(j.at("index").get<std::size_t>()),
                             j.at("k").get<std::int64_t>())};
  } else if (type == "random-phase") {
    rule.rule = RandomPhaseRule{j.at("seed").get<std::uint64_t>()};
  } else if (type == "product") {
    ProductRule prod;
    for (const auto& f : j.at("factors")) prod.factors.push_back(base_rule_from_json(f));
    rule.rule = std::move(prod);
  } else {
    throw std::invalid_argument("base rule: unknown type '" + type + "'");
  }
  return rule;
}

inline Json spec_to_json(const MultFnSpec& fn) {
  Json exceptions = Json::object();
  for (const auto& [p, a] : fn.exceptions)
    exceptions[std::to_string(p)] = angle_to_json(a);
  return Json{{"exceptions", exceptions},
              {"base", base_rule_to_json(fn.base)},
              {"twist_t", fn.twist_t}};
}

inline MultFnSpec spec_from_json(const Json& j) {
  MultFnSpec fn;
  for (const auto& [key, val] : j.at("exceptions").items()) {
    std::int64_t p = std::stoll(key);
    bool prime = p >= 2;
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) { prime = false; break; }
    if (!prime)
      throw std::invalid_argument("exceptions: key " + key + " is not prime");
    fn.exceptions[p] = angle_from_json(val);
  }
  fn.base = base_rule_from_json(j.at("base"));
  fn.twist_t = j.at("twist_t").get<double>();
  return fn;
}

// ---------------------------------------------------------------------------
// Report envelope and CSV
// ---------------------------------------------------------------------------

inline Json make_report(const std::string& command, Json config, Json results) {
  return Json{{"command", command},
              {"schema_version", kReportSchemaVersion},
              {"library_version", kVersion},
              {"config", std::move(config)},
              {"results", std::move(results)}};
}

/// Floats in CSV output carry 17 significant digits ('.' decimal separator,
/// no locale dependence).
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

inline Json complex_to_json(std::complex<double> z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace orbitlab
