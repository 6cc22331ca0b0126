#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rwuq {

/// Locale-independent number text for CSV/metadata output.
inline std::string fmt_number(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace rwuq
