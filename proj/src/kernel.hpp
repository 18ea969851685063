#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "xconvex/checker.hpp"

namespace xconvex::detail {

// Running maximum of a per-pair violation gap with its pair; ties keep the
// first pair in scan order, which is the lexicographically smallest (r, t).
struct ClassAcc {
  double best = -HUGE_VAL;
  std::uint32_t bi = 0, bj = 0;
  std::uint64_t triples = 0, escaped = 0;

  void offer(double gap, std::uint32_t i, std::uint32_t j) {
    if (gap > best) {
      best = gap;
      bi = i;
      bj = j;
    }
  }
  void merge(const ClassAcc& later) {
    triples += later.triples;
    escaped += later.escaped;
    if (later.best > best) {
      best = later.best;
      bi = later.bi;
      bj = later.bj;
    }
  }
};

// Same discipline for combos that leave the domain, ranked by distance.
struct EscapeAcc {
  double best = -HUGE_VAL;
  std::uint32_t bi = 0, bj = 0;
  std::uint64_t escapes = 0;

  void offer(double dist, std::uint32_t i, std::uint32_t j) {
    if (dist > best) {
      best = dist;
      bi = i;
      bj = j;
    }
  }
  void merge(const EscapeAcc& later) {
    escapes += later.escapes;
    if (later.best > best) {
      best = later.best;
      bi = later.bi;
      bj = later.bj;
    }
  }
};

// Inputs of one scan, precomputed once: sampled points, per-sample map
// offsets fl(g(t) - t), per-sample function values, and a membership table.
// Borrows M and phi's compiled program; keep both alive while scanning.
struct ScanContext {
  std::vector<Point> samples;
  std::vector<double> deltas;
  int dim = 1;

  std::vector<double> xs;        // dim == 1 flat coordinates
  std::vector<double> off;       // sample-major: off[j*dim + a]
  std::vector<double> phi_vals;  // empty when scanning the set only
  bool with_phi = false;
  double eps_val_eq = 0.0;

  // Closed-equivalent piece bounds: an open finite endpoint moves inward by
  // one ulp so membership is two comparisons; lo/hi keep the original bounds
  // for distance-to-closure.
  struct Piece1 {
    double lo_c, hi_c;
    double lo, hi;
  };
  std::vector<Piece1> pieces1;  // dim == 1 fast path
  const DomainSet* M = nullptr;

  // phi evaluation route. Specialized kinds reproduce the tree evaluation of
  // the matching shapes bit-for-bit; Generic runs the compiled program.
  enum class PhiKind { None, Const, Ident, FloorA, PwEq, Generic };
  PhiKind kind = PhiKind::None;
  double c0 = 0.0, v0 = 0.0, v1 = 0.0;
  const Program* prog = nullptr;
};

ScanContext make_context(const DomainSet& M, const GMap& g, const ScalarFn* phi,
                         const SamplePlan& plan, double eps_val_eq);

struct ScanResult {
  ClassAcc cls[kClassCount];
  EscapeAcc esc;
  std::uint64_t total_triples = 0;
};

// Scans all ordered sample pairs against the whole delta grid, reducing the
// ten class gaps and the escape maximum in one pass. Deterministic for any
// worker count: blocks are merged in index order and ties never replace.
ScanResult fused_scan(const ScanContext& cx);

// Re-derives the full witness for an accumulator's winning pair: the first
// delta in scan order whose gap (or escape distance) equals the recorded one.
Witness relocate_class_witness(const ScanContext& cx, ConvexClass cls,
                               const ClassAcc& acc);
Witness relocate_escape_witness(const ScanContext& cx, const EscapeAcc& acc);

// Scalar phi value along the scan's evaluation route (specialized dim-1
// shapes or the compiled program).
double phi_value(const ScanContext& cx, std::span<const double> x);

// Membership plus distance to the closure, with the scan's comparisons.
bool domain_member(const ScanContext& cx, std::span<const double> x,
                   double& dist);

struct TripleOut {
  Point combo;
  bool in_domain = false;
  double lhs = 0.0, rhs = 0.0, gap = 0.0, dist = 0.0;
};

struct ClassTraits {
  bool quasi;
  bool concave;
  bool interior;
};
inline ClassTraits class_traits(ConvexClass c) {
  return {is_quasi_class(c), is_concave_class(c), is_strict_class(c)};
}

// One triple evaluated exactly as the scan evaluates it.
TripleOut eval_triple_raw(const ScanContext& cx, ConvexClass cls,
                          std::uint32_t i, std::uint32_t j, double delta);

}  // namespace xconvex::detail
