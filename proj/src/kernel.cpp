#include "kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <utility>

#include "xconvex/errors.hpp"
#include "xconvex/expr.hpp"
#include "xconvex/numerics.hpp"
#include "xconvex/parallel.hpp"

namespace xconvex::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// phi evaluation functors. Each specialized kind reproduces the tree
// evaluator's arithmetic for the matching expression shape bit-for-bit;
// kTotal marks functions safe to evaluate at combos outside the domain.

struct PhiNone {
  static constexpr bool kTotal = true;
  double operator()(double) const { return 0.0; }
};
struct PhiConst {
  double c;
  static constexpr bool kTotal = true;
  double operator()(double) const { return c; }
};
struct PhiIdent {
  static constexpr bool kTotal = true;
  double operator()(double x) const { return x; }
};
struct PhiFloorA {
  double a;
  static constexpr bool kTotal = true;
  double operator()(double x) const { return a + std::floor(x); }
};
struct PhiPwEq {
  double c0, v0, v1;
  static constexpr bool kTotal = true;
  double operator()(double x) const { return x == c0 ? v0 : v1; }
};
struct PhiVM {
  const Program* p;
  static constexpr bool kTotal = false;
  double operator()(double x) const {
    return p->run(std::span<const double>(&x, 1));
  }
};

// ---------------------------------------------------------------------------
// Shape recognition for the specialized functors.

bool const_value(const Expr& e, const ParamMap& pm, double& out) {
  switch (e.kind) {
    case ExprKind::Number:
      out = e.number;
      return true;
    case ExprKind::Param: {
      auto it = pm.find(e.param);
      if (it == pm.end()) return false;
      out = it->second;
      return true;
    }
    case ExprKind::Neg: {
      double v;
      if (!const_value(*e.kids[0], pm, v)) return false;
      out = -v;
      return true;
    }
    default:
      return false;
  }
}

bool is_var0(const Expr& e) { return e.kind == ExprKind::Var && e.var == 0; }

bool is_floor_var0(const Expr& e) {
  return e.kind == ExprKind::Call && e.call == CallKind::Floor &&
         e.kids.size() == 1 && is_var0(*e.kids[0]);
}

void recognize(const ScalarFn& phi, ScanContext& cx) {
  using K = ScanContext::PhiKind;
  cx.kind = K::Generic;
  cx.prog = &phi.code;
  if (cx.dim != 1) return;
  const Expr& e = *phi.body;
  double c;
  if (const_value(e, phi.params, c)) {
    cx.kind = K::Const;
    cx.c0 = c;
    return;
  }
  if (is_var0(e)) {
    cx.kind = K::Ident;
    return;
  }
  if (e.kind == ExprKind::Add && e.kids.size() == 2) {
    const Expr& a = *e.kids[0];
    const Expr& b = *e.kids[1];
    if (const_value(a, phi.params, c) && is_floor_var0(b)) {
      cx.kind = K::FloorA;
      cx.c0 = c;
      return;
    }
    if (const_value(b, phi.params, c) && is_floor_var0(a)) {
      cx.kind = K::FloorA;
      cx.c0 = c;
      return;
    }
  }
  if (e.kind == ExprKind::Piecewise && e.arms.size() == 1 &&
      e.arms[0].rel == RelOp::Eq) {
    const PiecewiseArm& arm = e.arms[0];
    double guard, on_eq, dflt;
    bool var_left = is_var0(*arm.lhs) && const_value(*arm.rhs, phi.params, guard);
    bool var_right = is_var0(*arm.rhs) && const_value(*arm.lhs, phi.params, guard);
    if ((var_left || var_right) && const_value(*arm.value, phi.params, on_eq) &&
        const_value(*e.kids[0], phi.params, dflt)) {
      cx.kind = K::PwEq;
      cx.c0 = guard;
      cx.v0 = on_eq;
      cx.v1 = dflt;
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Membership against closed-equivalent piece bounds; dist is the distance to
// the closure (0 inside), valid whether or not x is a member.

template <int P>
inline bool member1(double x, const ScanContext::Piece1* pc, int np, double& dist) {
  if constexpr (P == 1) {
    (void)np;
    double a = pc[0].lo - x, b = x - pc[0].hi;
    double m = a > b ? a : b;
    dist = m > 0.0 ? m : 0.0;
    return (x >= pc[0].lo_c) & (x <= pc[0].hi_c);
  } else if constexpr (P == 2) {
    (void)np;
    double a0 = pc[0].lo - x, b0 = x - pc[0].hi;
    double m0 = a0 > b0 ? a0 : b0;
    m0 = m0 > 0.0 ? m0 : 0.0;
    double a1 = pc[1].lo - x, b1 = x - pc[1].hi;
    double m1 = a1 > b1 ? a1 : b1;
    m1 = m1 > 0.0 ? m1 : 0.0;
    dist = m0 < m1 ? m0 : m1;
    return ((x >= pc[0].lo_c) & (x <= pc[0].hi_c)) |
           ((x >= pc[1].lo_c) & (x <= pc[1].hi_c));
  } else {
    bool in = false;
    double dm = kInf;
    for (int p = 0; p < np; ++p) {
      in = in | ((x >= pc[p].lo_c) & (x <= pc[p].hi_c));
      double a = pc[p].lo - x, b = x - pc[p].hi;
      double m = a > b ? a : b;
      m = m > 0.0 ? m : 0.0;
      dm = m < dm ? m : dm;
    }
    dist = dm;
    return in;
  }
}

bool member_any(double x, const ScanContext::Piece1* pc, int np, double& dist) {
  return member1<0>(x, pc, np, dist);
}

// ---------------------------------------------------------------------------
// One (r, t) pair over the delta grid. The _i fields cover interior deltas
// only; the _a fields add the two endpoints.

struct PairStats {
  double gx_max_i = -kInf, gx_min_i = kInf;
  double l_max_i = -kInf, l_min_i = kInf;
  double d_max_i = -kInf;
  int esc_i = 0;
  double gx_max_a = -kInf, gx_min_a = kInf;
  double l_max_a = -kInf, l_min_a = kInf;
  double d_max_a = -kInf;
  int esc_a = 0;
};

template <class F, int P, bool WP>
inline void step(double u, double t, double diff, double lo, double hi,
                 double off, double pt, double pdiff, double plo, double phi_b,
                 const ScanContext::Piece1* pc, int np, F f, double& gxmax,
                 double& gxmin, double& lmax, double& lmin, double& dmax,
                 int& esc) {
  double v = t + u * diff;
  v = v < lo ? lo : v;
  v = v > hi ? hi : v;
  double x = v + off;
  double dist;
  bool in = member1<P>(x, pc, np, dist);
  esc += in ? 0 : 1;
  double dm = in ? -kInf : dist;
  dmax = dm > dmax ? dm : dmax;
  if constexpr (WP) {
    double lhs;
    if constexpr (F::kTotal) {
      lhs = f(x);
    } else {
      lhs = in ? f(x) : 0.0;
    }
    double w = pt + u * pdiff;
    w = w < plo ? plo : w;
    w = w > phi_b ? phi_b : w;
    double gx = lhs - w;
    double c1 = in ? gx : -kInf;
    gxmax = c1 > gxmax ? c1 : gxmax;
    double c2 = in ? gx : kInf;
    gxmin = c2 < gxmin ? c2 : gxmin;
    double c3 = in ? lhs : -kInf;
    lmax = c3 > lmax ? c3 : lmax;
    double c4 = in ? lhs : kInf;
    lmin = c4 < lmin ? c4 : lmin;
  }
}

template <class F, int P, bool WP>
PairStats scan_pair_1(double r, double t, double off, double pr, double pt,
                      const double* del, int D, const ScanContext::Piece1* pc,
                      int np, F f) {
  PairStats s;
  const double diff = r - t;
  const double lo = t < r ? t : r, hi = t < r ? r : t;
  const double pdiff = WP ? pr - pt : 0.0;
  const double plo = WP ? (pt < pr ? pt : pr) : 0.0;
  const double phi_b = WP ? (pt < pr ? pr : pt) : 0.0;
  double gxmax = -kInf, gxmin = kInf, lmax = -kInf, lmin = kInf, dmax = -kInf;
  int esc = 0;
  for (int d = 1; d <= D - 2; ++d)
    step<F, P, WP>(del[d], t, diff, lo, hi, off, pt, pdiff, plo, phi_b, pc, np,
                   f, gxmax, gxmin, lmax, lmin, dmax, esc);
  s.gx_max_i = gxmax;
  s.gx_min_i = gxmin;
  s.l_max_i = lmax;
  s.l_min_i = lmin;
  s.d_max_i = dmax;
  s.esc_i = esc;
  step<F, P, WP>(del[0], t, diff, lo, hi, off, pt, pdiff, plo, phi_b, pc, np, f,
                 gxmax, gxmin, lmax, lmin, dmax, esc);
  step<F, P, WP>(del[D - 1], t, diff, lo, hi, off, pt, pdiff, plo, phi_b, pc,
                 np, f, gxmax, gxmin, lmax, lmin, dmax, esc);
  s.gx_max_a = gxmax;
  s.gx_min_a = gxmin;
  s.l_max_a = lmax;
  s.l_min_a = lmin;
  s.d_max_a = dmax;
  s.esc_a = esc;
  return s;
}

// r == t: the lerp term is exactly t for every delta (u * (t - t) is +0) and
// the value-side lerp is exactly phi(t), so one evaluation covers the grid.
template <class F, int P, bool WP>
PairStats diag_pair(double t, double off, double pt, int D,
                    const ScanContext::Piece1* pc, int np, F f) {
  PairStats s;
  double x = t + off;
  double dist;
  bool in = member1<P>(x, pc, np, dist);
  const int din = D - 2;
  if (!in) {
    s.esc_i = din;
    s.esc_a = D;
    s.d_max_i = din > 0 ? dist : -kInf;
    s.d_max_a = dist;
    return s;
  }
  if constexpr (WP) {
    double lhs = f(x);
    double gx = lhs - pt;
    if (din > 0) {
      s.gx_max_i = s.gx_min_i = gx;
      s.l_max_i = s.l_min_i = lhs;
    }
    s.gx_max_a = s.gx_min_a = gx;
    s.l_max_a = s.l_min_a = lhs;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fold one pair's stats into the per-class accumulators.

inline void integrate(const ScanContext& cx, const PairStats& s, std::uint32_t i,
                      std::uint32_t j, double pr, double pt, int D,
                      ScanResult& out) {
  if (s.esc_a > 0) {
    out.esc.escapes += static_cast<std::uint64_t>(s.esc_a);
    out.esc.offer(s.d_max_a, i, j);
  }
  if (!cx.with_phi) return;
  const auto eval_a = static_cast<std::uint64_t>(D - s.esc_a);
  const int din = D - 2;
  const auto eval_i = static_cast<std::uint64_t>(din - s.esc_i);
  const double maxv = x_max(pr, pt);
  const double minv = x_min(pr, pt);

  ClassAcc& cX = out.cls[static_cast<int>(ConvexClass::XConvex)];
  ClassAcc& cQ = out.cls[static_cast<int>(ConvexClass::QuasiXConvex)];
  ClassAcc& cCX = out.cls[static_cast<int>(ConvexClass::XConcave)];
  ClassAcc& cCQ = out.cls[static_cast<int>(ConvexClass::QuasiXConcave)];
  cX.triples += eval_a;
  cX.escaped += s.esc_a;
  cQ.triples += eval_a;
  cQ.escaped += s.esc_a;
  cCX.triples += eval_a;
  cCX.escaped += s.esc_a;
  cCQ.triples += eval_a;
  cCQ.escaped += s.esc_a;
  if (eval_a > 0) {
    cX.offer(s.gx_max_a, i, j);
    cCX.offer(-s.gx_min_a, i, j);
    cQ.offer(s.l_max_a - maxv, i, j);
    cCQ.offer(minv - s.l_min_a, i, j);
  }
  if (i == j) return;
  ClassAcc& cSX = out.cls[static_cast<int>(ConvexClass::StrictlyXConvex)];
  ClassAcc& cSQ = out.cls[static_cast<int>(ConvexClass::StrictlyQuasiXConvex)];
  ClassAcc& cSCX = out.cls[static_cast<int>(ConvexClass::StrictlyXConcave)];
  ClassAcc& cSCQ = out.cls[static_cast<int>(ConvexClass::StrictlyQuasiXConcave)];
  cSX.triples += eval_i;
  cSX.escaped += s.esc_i;
  cSQ.triples += eval_i;
  cSQ.escaped += s.esc_i;
  cSCX.triples += eval_i;
  cSCX.escaped += s.esc_i;
  cSCQ.triples += eval_i;
  cSCQ.escaped += s.esc_i;
  if (eval_i > 0) {
    cSX.offer(s.gx_max_i, i, j);
    cSCX.offer(-s.gx_min_i, i, j);
    cSQ.offer(s.l_max_i - maxv, i, j);
    cSCQ.offer(minv - s.l_min_i, i, j);
  }
  if (std::fabs(pr - pt) > cx.eps_val_eq) {
    ClassAcc& cSS =
        out.cls[static_cast<int>(ConvexClass::SemistrictlyQuasiXConvex)];
    ClassAcc& cSCS =
        out.cls[static_cast<int>(ConvexClass::SemistrictlyQuasiXConcave)];
    cSS.triples += eval_i;
    cSS.escaped += s.esc_i;
    cSCS.triples += eval_i;
    cSCS.escaped += s.esc_i;
    if (eval_i > 0) {
      cSS.offer(s.l_max_i - maxv, i, j);
      cSCS.offer(minv - s.l_min_i, i, j);
    }
  }
}

// ---------------------------------------------------------------------------
// Block drivers.

template <class F, int P, bool WP>
void scan_block_1(const ScanContext& cx, F f, std::size_t ib, std::size_t ie,
                  ScanResult& out) {
  const double* xs = cx.xs.data();
  const double* off = cx.off.data();
  const double* pv = cx.phi_vals.empty() ? nullptr : cx.phi_vals.data();
  const double* del = cx.deltas.data();
  const int D = static_cast<int>(cx.deltas.size());
  const ScanContext::Piece1* pc = cx.pieces1.data();
  const int np = static_cast<int>(cx.pieces1.size());
  const std::size_t n = cx.xs.size();
  for (std::size_t i = ib; i < ie; ++i) {
    const double r = xs[i];
    const double pr = WP ? pv[i] : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = xs[j];
      const double pt = WP ? pv[j] : 0.0;
      PairStats s =
          i == j ? diag_pair<F, P, WP>(t, off[j], pt, D, pc, np, f)
                 : scan_pair_1<F, P, WP>(r, t, off[j], pr, pt, del, D, pc, np, f);
      integrate(cx, s, static_cast<std::uint32_t>(i),
                static_cast<std::uint32_t>(j), pr, pt, D, out);
    }
  }
}

template <class F, bool WP>
void dispatch_np(const ScanContext& cx, F f, std::size_t ib, std::size_t ie,
                 ScanResult& out) {
  switch (cx.pieces1.size()) {
    case 1:
      scan_block_1<F, 1, WP>(cx, f, ib, ie, out);
      break;
    case 2:
      scan_block_1<F, 2, WP>(cx, f, ib, ie, out);
      break;
    default:
      scan_block_1<F, 0, WP>(cx, f, ib, ie, out);
      break;
  }
}

void scan_block_dim1(const ScanContext& cx, std::size_t ib, std::size_t ie,
                     ScanResult& out) {
  using K = ScanContext::PhiKind;
  switch (cx.kind) {
    case K::None:
      dispatch_np<PhiNone, false>(cx, PhiNone{}, ib, ie, out);
      break;
    case K::Const:
      dispatch_np<PhiConst, true>(cx, PhiConst{cx.c0}, ib, ie, out);
      break;
    case K::Ident:
      dispatch_np<PhiIdent, true>(cx, PhiIdent{}, ib, ie, out);
      break;
    case K::FloorA:
      dispatch_np<PhiFloorA, true>(cx, PhiFloorA{cx.c0}, ib, ie, out);
      break;
    case K::PwEq:
      dispatch_np<PhiPwEq, true>(cx, PhiPwEq{cx.c0, cx.v0, cx.v1}, ib, ie, out);
      break;
    case K::Generic:
      dispatch_np<PhiVM, true>(cx, PhiVM{cx.prog}, ib, ie, out);
      break;
  }
}

void scan_block_nd(const ScanContext& cx, std::size_t ib, std::size_t ie,
                   ScanResult& out) {
  const int dim = cx.dim;
  const int D = static_cast<int>(cx.deltas.size());
  const std::size_t n = cx.samples.size();
  Point combo(static_cast<std::size_t>(dim));
  for (std::size_t i = ib; i < ie; ++i) {
    const Point& r = cx.samples[i];
    const double pr = cx.with_phi ? cx.phi_vals[i] : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Point& t = cx.samples[j];
      const double pt = cx.with_phi ? cx.phi_vals[j] : 0.0;
      const double* offj = cx.off.data() + j * static_cast<std::size_t>(dim);
      PairStats s;
      for (int d = 0; d < D; ++d) {
        const double u = cx.deltas[d];
        for (int a = 0; a < dim; ++a)
          combo[static_cast<std::size_t>(a)] =
              xlerp(t[static_cast<std::size_t>(a)],
                    r[static_cast<std::size_t>(a)], u) +
              offj[a];
        const bool interior = d > 0 && d < D - 1;
        if (!cx.M->contains(combo)) {
          const double dist = cx.M->distance(combo);
          ++s.esc_a;
          if (dist > s.d_max_a) s.d_max_a = dist;
          if (interior) {
            ++s.esc_i;
            if (dist > s.d_max_i) s.d_max_i = dist;
          }
          continue;
        }
        if (!cx.with_phi) continue;
        const double lhs = cx.prog->run(combo);
        const double w = xlerp(pt, pr, u);
        const double gx = lhs - w;
        if (gx > s.gx_max_a) s.gx_max_a = gx;
        if (gx < s.gx_min_a) s.gx_min_a = gx;
        if (lhs > s.l_max_a) s.l_max_a = lhs;
        if (lhs < s.l_min_a) s.l_min_a = lhs;
        if (interior) {
          if (gx > s.gx_max_i) s.gx_max_i = gx;
          if (gx < s.gx_min_i) s.gx_min_i = gx;
          if (lhs > s.l_max_i) s.l_max_i = lhs;
          if (lhs < s.l_min_i) s.l_min_i = lhs;
        }
      }
      integrate(cx, s, static_cast<std::uint32_t>(i),
                static_cast<std::uint32_t>(j), pr, pt, D, out);
    }
  }
}

double phi_at_1(const ScanContext& cx, double x) {
  using K = ScanContext::PhiKind;
  switch (cx.kind) {
    case K::Const:
      return cx.c0;
    case K::Ident:
      return x;
    case K::FloorA:
      return cx.c0 + std::floor(x);
    case K::PwEq:
      return x == cx.c0 ? cx.v0 : cx.v1;
    case K::Generic:
      return cx.prog->run(std::span<const double>(&x, 1));
    default:
      return 0.0;
  }
}

}  // namespace

ScanResult fused_scan(const ScanContext& cx) {
  const std::size_t n = cx.samples.size();
  ScanResult total;
  total.total_triples = static_cast<std::uint64_t>(n) * n * cx.deltas.size();
  if (n == 0) return total;
  int workers = worker_count();
  if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
  std::vector<ScanResult> parts(static_cast<std::size_t>(workers));
  parallel_blocks(n, [&](int w, std::size_t ib, std::size_t ie) {
    ScanResult& o = parts[static_cast<std::size_t>(w)];
    if (cx.dim == 1)
      scan_block_dim1(cx, ib, ie, o);
    else
      scan_block_nd(cx, ib, ie, o);
  });
  for (const ScanResult& p : parts) {
    for (int c = 0; c < kClassCount; ++c) total.cls[c].merge(p.cls[c]);
    total.esc.merge(p.esc);
  }
  return total;
}

double phi_value(const ScanContext& cx, std::span<const double> x) {
  if (cx.dim == 1) return phi_at_1(cx, x[0]);
  return cx.prog->run(x);
}

bool domain_member(const ScanContext& cx, std::span<const double> x,
                   double& dist) {
  if (cx.dim == 1 && !cx.pieces1.empty()) {
    double d;
    bool in = member_any(x[0], cx.pieces1.data(),
                         static_cast<int>(cx.pieces1.size()), d);
    dist = in ? 0.0 : d;
    return in;
  }
  bool in = cx.M->contains(x);
  dist = in ? 0.0 : cx.M->distance(x);
  return in;
}

TripleOut eval_triple_raw(const ScanContext& cx, ConvexClass cls,
                          std::uint32_t i, std::uint32_t j, double delta) {
  TripleOut to;
  const Point& r = cx.samples[i];
  const Point& t = cx.samples[j];
  const int dim = cx.dim;
  to.combo.resize(static_cast<std::size_t>(dim));
  const double* offj = cx.off.data() + static_cast<std::size_t>(j) * dim;
  for (int a = 0; a < dim; ++a)
    to.combo[static_cast<std::size_t>(a)] =
        xlerp(t[static_cast<std::size_t>(a)], r[static_cast<std::size_t>(a)],
              delta) +
        offj[a];
  if (dim == 1 && !cx.pieces1.empty()) {
    double dist;
    to.in_domain = member_any(to.combo[0], cx.pieces1.data(),
                              static_cast<int>(cx.pieces1.size()), dist);
    to.dist = to.in_domain ? 0.0 : dist;
  } else {
    to.in_domain = cx.M->contains(to.combo);
    to.dist = to.in_domain ? 0.0 : cx.M->distance(to.combo);
  }
  if (!cx.with_phi || !to.in_domain) return to;
  const double lhs =
      dim == 1 ? phi_at_1(cx, to.combo[0]) : cx.prog->run(to.combo);
  const double pr = cx.phi_vals[i], pt = cx.phi_vals[j];
  const ClassTraits tr = class_traits(cls);
  const double rhs = tr.quasi ? (tr.concave ? x_min(pr, pt) : x_max(pr, pt))
                              : xlerp(pt, pr, delta);
  to.lhs = lhs;
  to.rhs = rhs;
  to.gap = tr.concave ? rhs - lhs : lhs - rhs;
  return to;
}

Witness relocate_class_witness(const ScanContext& cx, ConvexClass cls,
                               const ClassAcc& acc) {
  const ClassTraits tr = class_traits(cls);
  const int D = static_cast<int>(cx.deltas.size());
  const int d0 = tr.interior ? 1 : 0;
  const int d1 = tr.interior ? D - 2 : D - 1;
  int fallback_d = -1;
  double fallback_gap = -kInf;
  for (int d = d0; d <= d1; ++d) {
    TripleOut to = eval_triple_raw(cx, cls, acc.bi, acc.bj, cx.deltas[d]);
    if (!to.in_domain) continue;
    if (to.gap == acc.best) {
      Witness w;
      w.r = cx.samples[acc.bi];
      w.t = cx.samples[acc.bj];
      w.delta = cx.deltas[static_cast<std::size_t>(d)];
      w.combo = std::move(to.combo);
      w.lhs = to.lhs;
      w.rhs = to.rhs;
      w.gap = to.gap;
      w.kind = WitnessKind::InequalityViolation;
      return w;
    }
    if (to.gap > fallback_gap) {
      fallback_gap = to.gap;
      fallback_d = d;
    }
  }
  // Exact-match rescan failed; take the pair's best delta instead. Not
  // expected to happen, but keeps the report well formed.
  Witness w;
  w.r = cx.samples[acc.bi];
  w.t = cx.samples[acc.bj];
  w.kind = WitnessKind::InequalityViolation;
  if (fallback_d >= 0) {
    TripleOut to = eval_triple_raw(cx, cls, acc.bi, acc.bj,
                                   cx.deltas[static_cast<std::size_t>(fallback_d)]);
    w.delta = cx.deltas[static_cast<std::size_t>(fallback_d)];
    w.combo = std::move(to.combo);
    w.lhs = to.lhs;
    w.rhs = to.rhs;
    w.gap = to.gap;
  }
  return w;
}

Witness relocate_escape_witness(const ScanContext& cx, const EscapeAcc& acc) {
  const int D = static_cast<int>(cx.deltas.size());
  Witness w;
  w.r = cx.samples[acc.bi];
  w.t = cx.samples[acc.bj];
  w.kind = WitnessKind::DomainEscape;
  for (int d = 0; d < D; ++d) {
    TripleOut to = eval_triple_raw(cx, ConvexClass::XConvex, acc.bi, acc.bj,
                                   cx.deltas[static_cast<std::size_t>(d)]);
    if (to.in_domain) continue;
    if (to.dist == acc.best) {
      w.delta = cx.deltas[static_cast<std::size_t>(d)];
      w.combo = std::move(to.combo);
      w.lhs = to.dist;
      w.rhs = 0.0;
      w.gap = to.dist;
      return w;
    }
  }
  return w;
}

ScanContext make_context(const DomainSet& M, const GMap& g, const ScalarFn* phi,
                         const SamplePlan& plan, double eps_val_eq) {
  if (g.dim != M.dim)
    throw InputError("g dimension does not match the domain");
  if (phi && phi->dim != M.dim)
    throw InputError("function dimension does not match the domain");
  ScanContext cx;
  cx.dim = M.dim;
  cx.M = &M;
  cx.eps_val_eq = eps_val_eq;
  SamplePlan p = plan;
  std::vector<ScalarFn> fns;
  if (phi) fns.push_back(*phi);
  enrich_plan(p, M, fns, &g);
  cx.samples = sample_points(M, p);
  cx.deltas = delta_samples(p);
  const std::size_t n = cx.samples.size();
  const int dim = cx.dim;
  cx.off.resize(n * static_cast<std::size_t>(dim));
  Point gbuf(static_cast<std::size_t>(dim));
  for (std::size_t j = 0; j < n; ++j) {
    g.eval(cx.samples[j], gbuf);
    for (int a = 0; a < dim; ++a)
      cx.off[j * dim + a] =
          gbuf[static_cast<std::size_t>(a)] -
          cx.samples[j][static_cast<std::size_t>(a)];
  }
  if (dim == 1) {
    cx.xs.resize(n);
    for (std::size_t j = 0; j < n; ++j) cx.xs[j] = cx.samples[j][0];
    cx.pieces1.reserve(M.pieces.size());
    for (const Box& b : M.pieces) {
      const Interval& iv = b[0];
      ScanContext::Piece1 pp;
      pp.lo = iv.lo;
      pp.hi = iv.hi;
      pp.lo_c = iv.lo_closed ? iv.lo : std::nextafter(iv.lo, kInf);
      pp.hi_c = iv.hi_closed ? iv.hi : std::nextafter(iv.hi, -kInf);
      cx.pieces1.push_back(pp);
    }
  }
  if (phi) {
    cx.with_phi = true;
    cx.phi_vals.resize(n);
    for (std::size_t j = 0; j < n; ++j) cx.phi_vals[j] = (*phi)(cx.samples[j]);
    recognize(*phi, cx);
  }
  return cx;
}

}  // namespace xconvex::detail
