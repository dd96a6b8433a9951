#pragma once

#include <cstdio>
#include <string>

namespace plap {

/// Round-trippable decimal representation (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Short representation for human-facing labels (%g).
inline std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace plap
