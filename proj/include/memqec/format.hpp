#pragma once

#include <cstdio>
#include <string>

namespace memqec {

// 12 significant digits, '.' decimal point; keeps CLI output diffable.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace memqec
