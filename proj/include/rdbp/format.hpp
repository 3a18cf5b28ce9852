#pragma once

#include <charconv>
#include <string>
#include <string_view>

namespace rdbp {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace rdbp
