#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace cvent {

/// 17 significant digits: round-trip exact for doubles.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace cvent
