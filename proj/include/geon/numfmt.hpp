#pragma once

#include <cstdio>
#include <string>

namespace geon {

/// All human-readable numeric output goes through this 12-significant-digit
/// formatter so reruns produce identical bytes.
inline std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace geon
