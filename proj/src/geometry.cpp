#include "xconvex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"
#include "xconvex/parallel.hpp"

namespace xconvex {

Interval Interval::make(double lo, double hi, bool lo_closed, bool hi_closed) {
  if (std::isnan(lo) || std::isnan(hi)) throw InputError("interval bound is NaN");
  if (lo > hi) throw InputError("interval has lo > hi");
  if (std::isinf(lo)) lo_closed = false;
  if (std::isinf(hi)) hi_closed = false;
  if (lo == hi && (!lo_closed || !hi_closed))
    throw InputError("degenerate interval must be closed");
  Interval iv;
  iv.lo = canonical_zero(lo);
  iv.hi = canonical_zero(hi);
  iv.lo_closed = lo_closed;
  iv.hi_closed = hi_closed;
  return iv;
}

DomainSet DomainSet::make(int dim, std::vector<Box> pieces) {
  if (dim < 1) throw InputError("domain dimension must be at least 1");
  if (pieces.empty()) throw InputError("domain needs at least one piece");
  for (const Box& b : pieces)
    if (static_cast<int>(b.size()) != dim)
      throw InputError("domain piece does not match dimension");
  DomainSet M;
  M.dim = dim;
  M.pieces = std::move(pieces);
  return M;
}

bool DomainSet::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim) return false;
  for (const Box& b : pieces) {
    bool in = true;
    for (int i = 0; i < dim; ++i)
      if (!b[static_cast<std::size_t>(i)].contains(p[static_cast<std::size_t>(i)])) {
        in = false;
        break;
      }
    if (in) return true;
  }
  return false;
}

double DomainSet::distance(std::span<const double> p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Box& b : pieces) {
    double sq = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = b[static_cast<std::size_t>(i)].distance(p[static_cast<std::size_t>(i)]);
      sq += d * d;
    }
    best = std::min(best, std::sqrt(sq));
  }
  return best;
}

namespace {

// Clip to [-B, B]; clipped endpoints become closed. Returns false when the
// interval misses the window entirely.
bool clip(const Interval& iv, double B, Interval& out) {
  double lo = iv.lo, hi = iv.hi;
  bool lc = iv.lo_closed, hc = iv.hi_closed;
  if (lo < -B) lo = -B, lc = true;
  if (hi > B) hi = B, hc = true;
  if (lo > hi) return false;
  if (lo == hi && !(lc && hc)) return false;
  out = Interval{lo, hi, lc, hc};
  return true;
}

std::vector<double> axis_values(const Interval& clipped, int k,
                                const std::vector<double>& extra,
                                bool integer_lattice) {
  std::vector<double> vals;
  double a = clipped.lo, b = clipped.hi;
  if (k >= 2 && b > a) {
    double h = (b - a) / (k - 1);
    double ga = clipped.lo_closed ? a : a + h;
    double gb = clipped.hi_closed ? b : b - h;
    if (ga <= gb) {
      vals.reserve(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        vals.push_back(xlerp(ga, gb, static_cast<double>(i) / (k - 1)));
    }
  } else if (k >= 1) {
    vals.push_back(xlerp(a, b, 0.5));
  }
  if (integer_lattice) {
    for (double v = std::ceil(a); v <= std::floor(b); v += 1.0) vals.push_back(v);
  }
  for (double v : extra) vals.push_back(v);
  for (double& v : vals) v = canonical_zero(v);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

bool point_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<Point> sample_points(const DomainSet& M, const SamplePlan& plan) {
  if (plan.grid_per_axis < 1) throw InputError("grid_per_axis must be positive");
  if (plan.truncation_bound <= 0 || !std::isfinite(plan.truncation_bound))
    throw InputError("truncation_bound must be positive and finite");
  if (!plan.breakpoints.empty() &&
      static_cast<int>(plan.breakpoints.size()) != M.dim)
    throw InputError("breakpoints must list one set per axis");

  std::vector<Point> out;
  Point p(static_cast<std::size_t>(M.dim));
  static const std::vector<double> no_extra;

  for (std::size_t pi = 0; pi < M.pieces.size(); ++pi) {
    const Box& box = M.pieces[pi];
    std::vector<Interval> clipped(box.size());
    bool alive = true;
    for (std::size_t ax = 0; ax < box.size(); ++ax)
      if (!clip(box[ax], plan.truncation_bound, clipped[ax])) {
        alive = false;
        break;
      }
    if (!alive) continue;

    std::vector<std::vector<double>> axes(box.size());
    for (std::size_t ax = 0; ax < box.size(); ++ax)
      axes[ax] = axis_values(clipped[ax], plan.grid_per_axis,
                             plan.breakpoints.empty() ? no_extra : plan.breakpoints[ax],
                             plan.integer_lattice);

    std::vector<std::size_t> idx(box.size(), 0);
    bool done = false;
    for (const auto& a : axes)
      if (a.empty()) done = true;
    while (!done) {
      for (std::size_t ax = 0; ax < box.size(); ++ax) p[ax] = axes[ax][idx[ax]];
      if (M.contains(p)) out.push_back(p);
      std::size_t ax = box.size();
      while (ax > 0) {
        --ax;
        if (++idx[ax] < axes[ax].size()) break;
        idx[ax] = 0;
        if (ax == 0) done = true;
      }
    }

    SplitMix64 rng(plan.seed ^ (0x9e3779b97f4a7c15ull * (pi + 1)));
    for (int n = 0; n < plan.random_count; ++n) {
      for (std::size_t ax = 0; ax < box.size(); ++ax)
        p[ax] = canonical_zero(rng.next_in(clipped[ax].lo, clipped[ax].hi));
      if (M.contains(p)) out.push_back(p);
    }
  }

  std::sort(out.begin(), out.end(), point_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> delta_samples(const SamplePlan& plan) {
  int D = plan.delta_grid;
  if (D < 2) throw InputError("delta_grid must be at least 2");
  std::vector<double> ds(static_cast<std::size_t>(D));
  for (int i = 0; i < D; ++i)
    ds[static_cast<std::size_t>(i)] = static_cast<double>(i) / (D - 1);
  return ds;
}

}  // namespace xconvex
