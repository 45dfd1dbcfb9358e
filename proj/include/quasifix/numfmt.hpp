#pragma once

#include <charconv>
#include <string>

namespace quasifix {

/// Shortest round-trip decimal form of a double (to_chars), used for all
/// CSV and JSON number output so repeated runs are byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace quasifix
