#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quasifix/contraction.hpp"
#include "quasifix/ifs.hpp"

namespace quasifix {

/// Config file / descriptor problem: missing file, malformed JSON, schema
/// violation (message names the field), or an expression that fails to
/// parse.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simulation-function descriptor. kind selects the roles of a/b:
///   expr: a = xi(s,t);  xi1: a = p(t), b = q(t);  xi2: a = f, b = g;
///   xi3: a = h(t);  max: parts.
struct XiConfig {
  std::string kind;
  std::string a, b;
  std::vector<XiConfig> parts;
};

struct SpaceConfig {
  std::string kind = "piecewise";  // preset name or "piecewise"
  double lambda = 0.0;             // weighted-abs parameter
  Interval domain{0.0, 1.0};
  std::optional<double> delta;     // declared delta (piecewise only)
  std::string gt, lt;              // piecewise branch expressions
};

struct IfsMapConfig {
  std::string map;
  XiConfig xi;
  std::string eta;
};

/// A fully described system: a space plus either a single contraction
/// (map/controls/xi/orientation) or an IFS (shared zeta, per-map xi/eta).
struct SystemConfig {
  std::string preset;  // preset name when constructed from one
  SpaceConfig space;

  std::string map, zeta, eta;
  std::optional<XiConfig> xi;
  Direction orientation = Direction::forward;

  bool is_ifs = false;
  std::string ifs_zeta;
  std::vector<IfsMapConfig> ifs_maps;
};

std::vector<std::string> preset_names();
SystemConfig preset_config(const std::string& name);

/// Reads and fully resolves a JSON config file (all expressions parsed,
/// preset references expanded, parameters validated).
SystemConfig load_config(const std::string& path);
SystemConfig parse_config_json(const std::string& json_text);

/// Canonical JSON form (presets dump in resolved form, so a spelled-out
/// config and its preset compare equal).
std::string config_json(const SystemConfig& config, int indent = -1);

QuasiMetricSpace make_space(const SpaceConfig& config);
SimulationFunction make_xi(const XiConfig& config);
/// Throws ConfigError when the config describes an IFS.
ContractionSystem make_contraction(const SystemConfig& config);
/// An IFS; a single-contraction config induces the one-map system.
IfsSystem make_ifs(const SystemConfig& config);

}  // namespace quasifix
