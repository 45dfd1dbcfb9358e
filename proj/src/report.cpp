#include "quasifix/report.hpp"

#include <json.hpp>

namespace quasifix {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::vacuous: return "vacuous";
  }
  return "?";
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["status"] = to_string(c.status);
    jc["witness"] = c.witness;
    jc["detail"] = c.detail;
    j["checks"].push_back(std::move(jc));
  }
  return j.dump();
}

}  // namespace quasifix
