#pragma once

#include <string>
#include <vector>

namespace quasifix {

enum class CheckStatus { pass, fail, vacuous };

const char* to_string(CheckStatus s);

/// One named verification check. A `fail` carries a witness tuple that
/// reproduces the violation through the public operations.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::vector<double> witness;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::fail) return false;
    return true;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  Check& add(std::string name, CheckStatus status, std::vector<double> witness = {},
             std::string detail = {}) {
    checks.push_back({std::move(name), status, std::move(witness), std::move(detail)});
    return checks.back();
  }

  void append(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

/// Machine-readable form: {"checks":[{"name":...,"status":...,"witness":[...],"detail":...}]}
std::string to_json(const Report& report);

}  // namespace quasifix
