#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace xconvex {

using Point = std::vector<double>;

// One axis-aligned interval. Infinite endpoints are always open; finite
// endpoints default to closed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  // Validates ordering and endpoint flags, throws InputError on nonsense
  // (lo > hi, closed infinite endpoint, NaN bounds).
  static Interval make(double lo, double hi, bool lo_closed = true,
                       bool hi_closed = true);

  bool contains(double x) const {
    if (std::isnan(x)) return false;
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  // Distance from x to the closure of the interval.
  double distance(double x) const {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
  }
};

using Box = std::vector<Interval>;  // one Interval per axis

// Finite union of axis-aligned boxes in R^dim. Pieces may overlap; membership
// is exact (no tolerance) so open/closed endpoints are honored bit-for-bit.
struct DomainSet {
  int dim = 1;
  std::vector<Box> pieces;

  static DomainSet make(int dim, std::vector<Box> pieces);

  bool contains(std::span<const double> p) const;
  bool contains(const Point& p) const { return contains(std::span<const double>(p)); }

  // Euclidean distance from p to the closure of the union; 0 for members.
  double distance(std::span<const double> p) const;
};

// Deterministic sampling recipe shared by every scan in the toolkit.
struct SamplePlan {
  int grid_per_axis = 101;
  int delta_grid = 501;
  int random_count = 2000;      // per piece, filtered by exact membership
  std::uint64_t seed = 42;
  double truncation_bound = 1000.0;  // boxes are clipped to [-B, B]^dim first
  std::vector<std::vector<double>> breakpoints;  // extra per-axis values
  bool integer_lattice = false;  // add every integer in the clipped range
};

// All sample points of M under the plan: per piece, an even grid on each
// clipped axis (open endpoints pulled inward by one grid step), breakpoints,
// the integer lattice when enabled, the cartesian product of those axis
// values, plus seeded uniform draws; everything filtered by exact membership,
// then globally sorted lexicographically and deduplicated bitwise.
std::vector<Point> sample_points(const DomainSet& M, const SamplePlan& plan);

// The delta grid {i / (D - 1) : 0 <= i < D}; always starts at 0 and ends at 1.
std::vector<double> delta_samples(const SamplePlan& plan);

}  // namespace xconvex
