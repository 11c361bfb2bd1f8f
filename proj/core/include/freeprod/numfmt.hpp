#pragma once

#include <cstdio>
#include <string>

namespace freeprod {

/// Fixed 9-decimal rendering used for every number we print; keeps golden
/// outputs byte-stable. Negative zero collapses to zero.
inline std::string fmt9(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

/// Exact round-trip rendering for raw maxima retained in reports.
inline std::string fmt_exact(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace freeprod
