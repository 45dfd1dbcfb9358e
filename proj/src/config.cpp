#include "quasifix/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quasifix/numfmt.hpp"

namespace quasifix {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) bad("unknown field '" + it.key() + "' in " + where);
  }
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad("missing field '" + std::string(key) + "' in " + where);
  if (!j.at(key).is_string()) bad("field '" + std::string(key) + "' in " + where + " must be a string");
  return j.at(key).get<std::string>();
}

Expr parse_expr_field(const std::string& text, const std::string& role) {
  try {
    return Expr::parse(text);
  } catch (const ParseError& err) {
    bad("expression for " + role + ": " + err.what());
  }
}

XiConfig parse_xi(const json& j, const std::string& where);

XiConfig parse_xi(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  XiConfig cfg;
  cfg.kind = require_string(j, "kind", where);
  if (cfg.kind == "expr") {
    check_keys(j, {"kind", "xi"}, where);
    cfg.a = require_string(j, "xi", where);
  } else if (cfg.kind == "xi1") {
    check_keys(j, {"kind", "p", "q"}, where);
    cfg.a = require_string(j, "p", where);
    cfg.b = require_string(j, "q", where);
  } else if (cfg.kind == "xi2") {
    check_keys(j, {"kind", "f", "g"}, where);
    cfg.a = require_string(j, "f", where);
    cfg.b = require_string(j, "g", where);
  } else if (cfg.kind == "xi3") {
    check_keys(j, {"kind", "h"}, where);
    cfg.a = require_string(j, "h", where);
  } else if (cfg.kind == "max") {
    check_keys(j, {"kind", "of"}, where);
    if (!j.contains("of") || !j.at("of").is_array() || j.at("of").empty())
      bad("field 'of' in " + where + " must be a nonempty array");
    std::size_t k = 0;
    for (const auto& part : j.at("of"))
      cfg.parts.push_back(parse_xi(part, where + ".of[" + std::to_string(k++) + "]"));
  } else {
    bad("unknown xi kind '" + cfg.kind + "' in " + where);
  }
  return cfg;
}

SpaceConfig parse_space(const json& j) {
  if (!j.is_object()) bad("'space' must be an object");
  SpaceConfig cfg;
  cfg.kind = require_string(j, "kind", "space");
  if (cfg.kind == "weighted-abs") {
    check_keys(j, {"kind", "lambda", "domain"}, "space");
    if (!j.contains("lambda") || !j.at("lambda").is_number())
      bad("space 'weighted-abs' requires numeric field 'lambda'");
    cfg.lambda = j.at("lambda").get<double>();
    if (!(cfg.lambda > 0.0)) bad("field 'lambda' must be > 0");
  } else if (cfg.kind == "piecewise") {
    check_keys(j, {"kind", "gt", "lt", "delta", "domain"}, "space");
    cfg.gt = require_string(j, "gt", "space");
    cfg.lt = require_string(j, "lt", "space");
    if (j.contains("delta")) {
      if (!j.at("delta").is_number()) bad("field 'delta' must be a number");
      cfg.delta = j.at("delta").get<double>();
      if (!(*cfg.delta > 0.0)) bad("field 'delta' must be > 0");
    }
  } else if (cfg.kind == "sorgenfrey" || cfg.kind == "example3" || cfg.kind == "example4") {
    check_keys(j, {"kind", "domain"}, "space");
  } else {
    bad("unknown space kind '" + cfg.kind + "'");
  }
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
      bad("field 'domain' must be [lo, hi]");
    cfg.domain = {d[0].get<double>(), d[1].get<double>()};
    if (!(cfg.domain.lo < cfg.domain.hi)) bad("field 'domain' must satisfy lo < hi");
  }
  return cfg;
}

SystemConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config root must be an object");

  if (j.contains("preset")) {
    check_keys(j, {"preset"}, "config");
    return preset_config(require_string(j, "preset", "config"));
  }

  check_keys(j, {"space", "map", "controls", "xi", "orientation", "ifs"}, "config");
  if (!j.contains("space")) bad("missing field 'space'");
  SystemConfig cfg;
  cfg.space = parse_space(j.at("space"));

  const bool has_map = j.contains("map");
  const bool has_ifs = j.contains("ifs");
  if (has_map == has_ifs) bad("config requires exactly one of 'map' or 'ifs'");

  if (has_map) {
    cfg.map = require_string(j, "map", "config");
    if (!j.contains("controls")) bad("missing field 'controls'");
    const auto& c = j.at("controls");
    check_keys(c, {"zeta", "eta"}, "controls");
    cfg.zeta = require_string(c, "zeta", "controls");
    cfg.eta = require_string(c, "eta", "controls");
    if (!j.contains("xi")) bad("missing field 'xi'");
    cfg.xi = parse_xi(j.at("xi"), "xi");
    if (j.contains("orientation")) {
      std::string o = require_string(j, "orientation", "config");
      if (o == "forward")
        cfg.orientation = Direction::forward;
      else if (o == "backward")
        cfg.orientation = Direction::backward;
      else
        bad("field 'orientation' must be \"forward\" or \"backward\"");
    }
  } else {
    const auto& f = j.at("ifs");
    check_keys(f, {"zeta", "maps"}, "ifs");
    cfg.is_ifs = true;
    cfg.ifs_zeta = require_string(f, "zeta", "ifs");
    if (!f.contains("maps") || !f.at("maps").is_array() || f.at("maps").empty())
      bad("field 'maps' in ifs must be a nonempty array");
    std::size_t k = 0;
    for (const auto& m : f.at("maps")) {
      std::string where = "ifs.maps[" + std::to_string(k++) + "]";
      check_keys(m, {"map", "xi", "eta"}, where);
      IfsMapConfig mc;
      mc.map = require_string(m, "map", where);
      if (!m.contains("xi")) bad("missing field 'xi' in " + where);
      mc.xi = parse_xi(m.at("xi"), where + ".xi");
      mc.eta = require_string(m, "eta", where);
      cfg.ifs_maps.push_back(std::move(mc));
    }
  }
  return cfg;
}

ordered_json xi_json(const XiConfig& cfg) {
  ordered_json j;
  j["kind"] = cfg.kind == "max" ? "max" : cfg.kind;
  if (cfg.kind == "expr") {
    j["xi"] = cfg.a;
  } else if (cfg.kind == "xi1") {
    j["p"] = cfg.a;
    j["q"] = cfg.b;
  } else if (cfg.kind == "xi2") {
    j["f"] = cfg.a;
    j["g"] = cfg.b;
  } else if (cfg.kind == "xi3") {
    j["h"] = cfg.a;
  } else {
    j["of"] = ordered_json::array();
    for (const auto& p : cfg.parts) j["of"].push_back(xi_json(p));
  }
  return j;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example3", "example4a", "example4b", "cantor"};
}

SystemConfig preset_config(const std::string& name) {
  SystemConfig cfg;
  cfg.preset = name;
  if (name == "example3") {
    cfg.space.kind = "example3";
    cfg.map = "x^2/(4*x^2+3)";
    cfg.zeta = "t";
    cfg.eta = "t^2/3";
    cfg.xi = XiConfig{"expr", "t/(t+1)-s", "", {}};
    cfg.orientation = Direction::forward;
  } else if (name == "example4a" || name == "example4b") {
    cfg.space.kind = "example4";
    cfg.is_ifs = true;
    cfg.ifs_zeta = "t";
    const char* w1 = name == "example4a" ? "x^3/(66*x^2+3)" : "x^3/(66*x^2+5)";
    cfg.ifs_maps.push_back({w1, XiConfig{"expr", "t/(t+1)-s", "", {}}, "t^2"});
    cfg.ifs_maps.push_back(
        {"4*x^2/(4*x^2+1)", XiConfig{"expr", "16*t/(t+16)-s", "", {}}, "t^2"});
  } else if (name == "cantor") {
    cfg.space.kind = "weighted-abs";
    cfg.space.lambda = 2.0;
    cfg.is_ifs = true;
    cfg.ifs_zeta = "t";
    cfg.ifs_maps.push_back({"x/3", XiConfig{"expr", "3*t/4-s", "", {}}, "t/2"});
    cfg.ifs_maps.push_back({"x/3+2/3", XiConfig{"expr", "3*t/4-s", "", {}}, "t/2"});
  } else {
    bad("unknown preset '" + name + "'");
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

SystemConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& err) {
    bad(std::string("JSON parse error: ") + err.what());
  }
  SystemConfig cfg = parse_config(j);
  // Resolve everything once so malformed expressions and parameters fail
  // here, not at first use.
  if (cfg.is_ifs)
    make_ifs(cfg);
  else
    make_contraction(cfg);
  return cfg;
}

std::string config_json(const SystemConfig& cfg, int indent) {
  ordered_json j;
  ordered_json js;
  js["kind"] = cfg.space.kind;
  js["domain"] = {cfg.space.domain.lo, cfg.space.domain.hi};
  if (cfg.space.kind == "weighted-abs") js["lambda"] = cfg.space.lambda;
  if (cfg.space.kind == "piecewise") {
    js["gt"] = cfg.space.gt;
    js["lt"] = cfg.space.lt;
    if (cfg.space.delta) js["delta"] = *cfg.space.delta;
  }
  j["space"] = std::move(js);

  if (cfg.is_ifs) {
    ordered_json jf;
    jf["zeta"] = cfg.ifs_zeta;
    jf["maps"] = ordered_json::array();
    for (const auto& m : cfg.ifs_maps) {
      ordered_json jm;
      jm["map"] = m.map;
      jm["xi"] = xi_json(m.xi);
      jm["eta"] = m.eta;
      jf["maps"].push_back(std::move(jm));
    }
    j["ifs"] = std::move(jf);
  } else {
    j["map"] = cfg.map;
    j["controls"] = {{"zeta", cfg.zeta}, {"eta", cfg.eta}};
    j["xi"] = xi_json(*cfg.xi);
    j["orientation"] = cfg.orientation == Direction::forward ? "forward" : "backward";
  }
  return indent >= 0 ? j.dump(indent) : j.dump();
}

QuasiMetricSpace make_space(const SpaceConfig& cfg) {
  try {
    if (cfg.kind == "piecewise")
      return QuasiMetricSpace::piecewise(cfg.domain, parse_expr_field(cfg.gt, "space.gt"),
                                         parse_expr_field(cfg.lt, "space.lt"), cfg.delta);
    return QuasiMetricSpace::preset(cfg.kind, cfg.lambda, cfg.domain);
  } catch (const std::invalid_argument& err) {
    bad(std::string("space: ") + err.what());
  }
}

SimulationFunction make_xi(const XiConfig& cfg) {
  try {
    if (cfg.kind == "expr") return SimulationFunction::from_expr(parse_expr_field(cfg.a, "xi"));
    if (cfg.kind == "xi1")
      return SimulationFunction::family_xi1(parse_expr_field(cfg.a, "xi1.p"),
                                            parse_expr_field(cfg.b, "xi1.q"));
    if (cfg.kind == "xi2")
      return SimulationFunction::family_xi2(parse_expr_field(cfg.a, "xi2.f"),
                                            parse_expr_field(cfg.b, "xi2.g"));
    if (cfg.kind == "xi3")
      return SimulationFunction::family_xi3(parse_expr_field(cfg.a, "xi3.h"));
    std::vector<SimulationFunction> parts;
    for (const auto& p : cfg.parts) parts.push_back(make_xi(p));
    return SimulationFunction::max_combined(std::move(parts));
  } catch (const std::invalid_argument& err) {
    bad(std::string("xi: ") + err.what());
  }
}

ContractionSystem make_contraction(const SystemConfig& cfg) {
  if (cfg.is_ifs)
    bad("this operation requires a single-map contraction config, not an IFS");
  try {
    return ContractionSystem(make_space(cfg.space), parse_expr_field(cfg.map, "map"),
                             make_xi(*cfg.xi),
                             ControlPair(parse_expr_field(cfg.zeta, "controls.zeta"),
                                         parse_expr_field(cfg.eta, "controls.eta")),
                             cfg.orientation);
  } catch (const std::invalid_argument& err) {
    bad(std::string("config: ") + err.what());
  }
}

IfsSystem make_ifs(const SystemConfig& cfg) {
  try {
    if (!cfg.is_ifs) {
      // A single contraction induces the one-map IFS with its controls.
      std::vector<IfsMap> maps;
      maps.push_back({parse_expr_field(cfg.map, "map"), make_xi(*cfg.xi),
                      parse_expr_field(cfg.eta, "controls.eta")});
      return IfsSystem(make_space(cfg.space), parse_expr_field(cfg.zeta, "controls.zeta"),
                       std::move(maps));
    }
    std::vector<IfsMap> maps;
    std::size_t k = 0;
    for (const auto& m : cfg.ifs_maps) {
      std::string where = "ifs.maps[" + std::to_string(k++) + "]";
      maps.push_back({parse_expr_field(m.map, where + ".map"), make_xi(m.xi),
                      parse_expr_field(m.eta, where + ".eta")});
    }
    return IfsSystem(make_space(cfg.space), parse_expr_field(cfg.ifs_zeta, "ifs.zeta"),
                     std::move(maps));
  } catch (const std::invalid_argument& err) {
    bad(std::string("config: ") + err.what());
  }
}

}  // namespace quasifix
