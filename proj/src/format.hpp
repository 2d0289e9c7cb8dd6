#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace ricci::detail {

/// Shortest decimal text that round-trips to the same double; empty for NaN.
inline std::string format_number(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace ricci::detail
