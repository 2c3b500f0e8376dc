#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace csdelay {

/// Round-trip-exact decimal text for a double (17 significant digits).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join_doubles(const std::vector<double>& xs, const char* sep = " ") {
  std::string out;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j > 0) out += sep;
    out += format_double(xs[j]);
  }
  return out;
}

}  // namespace csdelay
