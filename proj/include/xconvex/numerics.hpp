#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

namespace xconvex {

// Interpolates from a (at u = 0) to b (at u = 1) as a + u * (b - a), clamped
// to [min(a, b), max(a, b)]. One rounding for the product, one for the sum,
// never a fused multiply-add, so every caller reproduces identical bits.
// Exact at u = 0; the clamp keeps results inside the endpoint range, so a
// convex box can never be escaped by rounding.
inline double xlerp(double a, double b, double u) {
  double v = a + u * (b - a);
  double lo = std::min(a, b), hi = std::max(a, b);
  return std::min(std::max(v, lo), hi);
}

// Maps -0.0 to +0.0 so serialized samples and witnesses have one spelling.
inline double canonical_zero(double x) { return x == 0.0 ? 0.0 : x; }

// Units in the last place of the larger magnitude,+inf when signs of
// infinity/nan get involved. Used for witness reproducibility checks.
inline double ulp_of(double x) {
  double ax = std::fabs(x);
  if (!std::isfinite(ax)) return std::numeric_limits<double>::infinity();
  double up = std::nextafter(ax, std::numeric_limits<double>::infinity());
  return up - ax;
}

inline bool within_ulps(double a, double b, int n) {
  if (a == b) return true;
  if (std::isnan(a) || std::isnan(b)) return false;
  double scale = std::max(std::fabs(a), std::fabs(b));
  double u = ulp_of(scale);
  if (!std::isfinite(u)) return false;
  return std::fabs(a - b) <= n * u;
}

// Round-trippable decimal form (17 significant digits), -0 canonicalized,
// infinities spelled the way the JSON layer expects.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", canonical_zero(x));
  return buf;
}

}  // namespace xconvex
