#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace tailblocks::jsonfmt {

// numbers are emitted at 12 significant digits so that report bytes are
// stable across reruns
inline std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string num(std::size_t v) { return std::to_string(v); }

inline std::string str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace tailblocks::jsonfmt
