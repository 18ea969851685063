#include "xconvex/checker.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "kernel.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"

namespace xconvex {

const char* class_name(ConvexClass c) {
  switch (c) {
    case ConvexClass::XConvex:
      return "x_convex";
    case ConvexClass::StrictlyXConvex:
      return "strictly_x_convex";
    case ConvexClass::QuasiXConvex:
      return "quasi_x_convex";
    case ConvexClass::StrictlyQuasiXConvex:
      return "strictly_quasi_x_convex";
    case ConvexClass::SemistrictlyQuasiXConvex:
      return "semistrictly_quasi_x_convex";
    case ConvexClass::XConcave:
      return "x_concave";
    case ConvexClass::StrictlyXConcave:
      return "strictly_x_concave";
    case ConvexClass::QuasiXConcave:
      return "quasi_x_concave";
    case ConvexClass::StrictlyQuasiXConcave:
      return "strictly_quasi_x_concave";
    case ConvexClass::SemistrictlyQuasiXConcave:
      return "semistrictly_quasi_x_concave";
  }
  return "unknown";
}

bool is_strict_class(ConvexClass c) {
  switch (c) {
    case ConvexClass::StrictlyXConvex:
    case ConvexClass::StrictlyQuasiXConvex:
    case ConvexClass::SemistrictlyQuasiXConvex:
    case ConvexClass::StrictlyXConcave:
    case ConvexClass::StrictlyQuasiXConcave:
    case ConvexClass::SemistrictlyQuasiXConcave:
      return true;
    default:
      return false;
  }
}

bool is_concave_class(ConvexClass c) {
  switch (c) {
    case ConvexClass::XConcave:
    case ConvexClass::StrictlyXConcave:
    case ConvexClass::QuasiXConcave:
    case ConvexClass::StrictlyQuasiXConcave:
    case ConvexClass::SemistrictlyQuasiXConcave:
      return true;
    default:
      return false;
  }
}

bool is_quasi_class(ConvexClass c) {
  switch (c) {
    case ConvexClass::QuasiXConvex:
    case ConvexClass::StrictlyQuasiXConvex:
    case ConvexClass::SemistrictlyQuasiXConvex:
    case ConvexClass::QuasiXConcave:
    case ConvexClass::StrictlyQuasiXConcave:
    case ConvexClass::SemistrictlyQuasiXConcave:
      return true;
    default:
      return false;
  }
}

Point combination_point(const Point& r, const Point& t, double delta,
                        const GMap& g) {
  if (r.size() != t.size() ||
      static_cast<int>(r.size()) != g.dim)
    throw InputError("combination_point: dimension mismatch");
  Point gt(r.size());
  g.eval(t, gt);
  Point c(r.size());
  for (std::size_t a = 0; a < r.size(); ++a)
    c[a] = xlerp(t[a], r[a], delta) + (gt[a] - t[a]);
  return c;
}

namespace {

using detail::ScanContext;
using detail::ScanResult;

// Sharpen a Falsified inequality witness: bounded bisection on delta between
// the neighbors of the winning grid value, keeping the maximal recomputed gap
// (never worse than the grid one).
void refine_witness(const ScanContext& cx, ConvexClass cls, std::uint32_t bi,
                    std::uint32_t bj, Witness& w) {
  const auto& del = cx.deltas;
  const int D = static_cast<int>(del.size());
  const detail::ClassTraits tr = detail::class_traits(cls);
  const int d0 = tr.interior ? 1 : 0;
  const int d1 = tr.interior ? D - 2 : D - 1;
  int k = -1;
  for (int d = d0; d <= d1; ++d)
    if (del[static_cast<std::size_t>(d)] == w.delta) {
      k = d;
      break;
    }
  if (k < 0) return;
  double lo = del[static_cast<std::size_t>(k > d0 ? k - 1 : k)];
  double hi = del[static_cast<std::size_t>(k < d1 ? k + 1 : k)];
  double best_delta = w.delta;
  double best_gap = w.gap;
  auto gap_at = [&](double u) {
    detail::TripleOut to = detail::eval_triple_raw(cx, cls, bi, bj, u);
    return to.in_domain ? to.gap : -std::numeric_limits<double>::infinity();
  };
  for (int it = 0; it < 32; ++it) {
    double m1 = lo + (best_delta - lo) * 0.5;
    double m2 = best_delta + (hi - best_delta) * 0.5;
    double g1 = gap_at(m1);
    double g2 = gap_at(m2);
    if (g1 > best_gap || (g1 == best_gap && m1 < best_delta)) {
      hi = best_delta;
      best_delta = m1;
      best_gap = g1;
    } else if (g2 > best_gap) {
      lo = best_delta;
      best_delta = m2;
      best_gap = g2;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  if (best_delta == w.delta) return;
  detail::TripleOut to = detail::eval_triple_raw(cx, cls, bi, bj, best_delta);
  if (!to.in_domain || to.gap < w.gap) return;
  w.delta = best_delta;
  w.combo = std::move(to.combo);
  w.lhs = to.lhs;
  w.rhs = to.rhs;
  w.gap = to.gap;
}

ClassVerdict verdict_from(const ScanContext& cx, const ScanResult& res,
                          ConvexClass cls, const Tolerances& tol,
                          const CheckOptions& opt) {
  const detail::ClassAcc& acc = res.cls[static_cast<int>(cls)];
  ClassVerdict v;
  v.class_name = class_name(cls);
  v.triples_checked = acc.triples;
  v.combos_escaped = acc.escaped;
  if (acc.triples == 0) {
    if (acc.escaped > 0) {
      v.status = VerdictStatus::DomainEscape;
      if (res.esc.escapes > 0)
        v.witness = detail::relocate_escape_witness(cx, res.esc);
      v.notes.push_back("every quantified combination left the domain");
    } else {
      v.status = VerdictStatus::NoCounterexampleFound;
      v.notes.push_back("no quantified triples under this plan");
    }
    return v;
  }
  v.worst_gap = canonical_zero(acc.best);
  if (cls == ConvexClass::StrictlyXConvex || cls == ConvexClass::StrictlyXConcave)
    v.notes.push_back(
        "strict comparison uses delta*phi(r) + (1-delta)*phi(t) on the "
        "right-hand side");
  const double threshold = is_strict_class(cls) ? -tol.eps_strict : tol.eps_ineq;
  if (acc.best > threshold) {
    v.status = VerdictStatus::Falsified;
    Witness w = detail::relocate_class_witness(cx, cls, acc);
    if (opt.refine) refine_witness(cx, cls, acc.bi, acc.bj, w);
    v.witness = std::move(w);
  } else {
    v.status = VerdictStatus::NoCounterexampleFound;
  }
  return v;
}

ClassVerdict run_one(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                     const SamplePlan& plan, const Tolerances& tol,
                     ConvexClass cls, const CheckOptions& opt) {
  ScanContext cx = detail::make_context(M, g, &phi, plan, tol.eps_val_eq);
  ScanResult res = detail::fused_scan(cx);
  return verdict_from(cx, res, cls, tol, opt);
}

ClassVerdict set_verdict(const ScanContext& cx, const ScanResult& res) {
  ClassVerdict v;
  v.class_name = "x_convex_set";
  v.triples_checked = res.total_triples;
  v.combos_escaped = res.esc.escapes;
  if (res.esc.escapes > 0) {
    v.status = VerdictStatus::Falsified;
    v.witness = detail::relocate_escape_witness(cx, res.esc);
    v.worst_gap = res.esc.best;
  } else {
    v.status = VerdictStatus::NoCounterexampleFound;
  }
  return v;
}

bool interior_distinct_witness(const ClassVerdict& v) {
  if (!v.witness) return false;
  const Witness& w = *v.witness;
  if (w.kind != WitnessKind::InequalityViolation) return false;
  if (!(w.delta > 0.0 && w.delta < 1.0)) return false;
  return w.r != w.t;
}

}  // namespace

ClassVerdict check_x_convex_set(const DomainSet& M, const GMap& g,
                                const SamplePlan& plan) {
  ScanContext cx = detail::make_context(M, g, nullptr, plan, 0.0);
  ScanResult res = detail::fused_scan(cx);
  return set_verdict(cx, res);
}

ClassVerdict check_x_convex(const ScalarFn& phi, const GMap& g,
                            const DomainSet& M, const SamplePlan& plan,
                            const Tolerances& tol, const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol, ConvexClass::XConvex, opt);
}

ClassVerdict check_strictly_x_convex(const ScalarFn& phi, const GMap& g,
                                     const DomainSet& M, const SamplePlan& plan,
                                     const Tolerances& tol,
                                     const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol, ConvexClass::StrictlyXConvex, opt);
}

ClassVerdict check_quasi_x_convex(const ScalarFn& phi, const GMap& g,
                                  const DomainSet& M, const SamplePlan& plan,
                                  const Tolerances& tol,
                                  const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol, ConvexClass::QuasiXConvex, opt);
}

ClassVerdict check_strictly_quasi_x_convex(const ScalarFn& phi, const GMap& g,
                                           const DomainSet& M,
                                           const SamplePlan& plan,
                                           const Tolerances& tol,
                                           const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol, ConvexClass::StrictlyQuasiXConvex, opt);
}

ClassVerdict check_semistrictly_quasi_x_convex(const ScalarFn& phi,
                                               const GMap& g,
                                               const DomainSet& M,
                                               const SamplePlan& plan,
                                               const Tolerances& tol,
                                               const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol,
                 ConvexClass::SemistrictlyQuasiXConvex, opt);
}

ClassVerdict check_concave_variants(const ScalarFn& phi, const GMap& g,
                                    const DomainSet& M, const SamplePlan& plan,
                                    const Tolerances& tol, ConvexClass cls,
                                    const CheckOptions& opt) {
  // The fused scan's concave gaps equal the convex gaps of the negated
  // function bit-for-bit, so no separate negated pass is needed.
  return run_one(phi, g, M, plan, tol, cls, opt);
}

ClassVerdict check_class(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                         const SamplePlan& plan, const Tolerances& tol,
                         ConvexClass cls, const CheckOptions& opt) {
  return run_one(phi, g, M, plan, tol, cls, opt);
}

ClassifyResult classify(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                        const SamplePlan& plan, const Tolerances& tol,
                        const CheckOptions& opt) {
  ClassifyResult out;
  ScanContext cx = detail::make_context(M, g, &phi, plan, tol.eps_val_eq);
  ScanResult res = detail::fused_scan(cx);
  out.set_check = set_verdict(cx, res);
  for (int c = 0; c < kClassCount; ++c)
    out.classes[static_cast<std::size_t>(c)] =
        verdict_from(cx, res, static_cast<ConvexClass>(c), tol, opt);

  auto passed = [&](ConvexClass c) {
    return out.classes[static_cast<std::size_t>(c)].status ==
           VerdictStatus::NoCounterexampleFound;
  };
  auto falsified = [&](ConvexClass c) -> const ClassVerdict& {
    return out.classes[static_cast<std::size_t>(c)];
  };
  auto flag = [&](const std::string& msg) {
    out.consistent = false;
    out.notes.push_back(msg);
  };

  // The value-side bound of the quasi inequality dominates the lerp bound
  // triple by triple, so a quasi violation forces a plain violation.
  struct { ConvexClass weak, strong; } chains[] = {
      {ConvexClass::QuasiXConvex, ConvexClass::XConvex},
      {ConvexClass::StrictlyQuasiXConvex, ConvexClass::StrictlyXConvex},
      {ConvexClass::QuasiXConcave, ConvexClass::XConcave},
      {ConvexClass::StrictlyQuasiXConcave, ConvexClass::StrictlyXConcave},
  };
  for (const auto& ch : chains) {
    if (passed(ch.strong) &&
        falsified(ch.weak).status == VerdictStatus::Falsified)
      flag(std::string(class_name(ch.strong)) +
           " found no counterexample but " + class_name(ch.weak) +
           " was falsified");
  }
  // The semi-strict quantifier is a subset of the strict-quasi one.
  struct { ConvexClass sub, super; } subs[] = {
      {ConvexClass::SemistrictlyQuasiXConvex, ConvexClass::StrictlyQuasiXConvex},
      {ConvexClass::SemistrictlyQuasiXConcave,
       ConvexClass::StrictlyQuasiXConcave},
  };
  for (const auto& sb : subs) {
    if (passed(sb.super) &&
        falsified(sb.sub).status == VerdictStatus::Falsified)
      flag(std::string(class_name(sb.super)) +
           " found no counterexample but " + class_name(sb.sub) +
           " was falsified");
  }
  // Strict pass forbids a non-strict violation at an interior delta with
  // distinct points; endpoint or diagonal violations are outside the strict
  // quantifier and are legitimate.
  struct { ConvexClass strict_c, plain; } striks[] = {
      {ConvexClass::StrictlyXConvex, ConvexClass::XConvex},
      {ConvexClass::StrictlyQuasiXConvex, ConvexClass::QuasiXConvex},
      {ConvexClass::StrictlyXConcave, ConvexClass::XConcave},
      {ConvexClass::StrictlyQuasiXConcave, ConvexClass::QuasiXConcave},
  };
  for (const auto& st : striks) {
    const ClassVerdict& pv = falsified(st.plain);
    if (passed(st.strict_c) && pv.status == VerdictStatus::Falsified &&
        interior_distinct_witness(pv))
      flag(std::string(class_name(st.strict_c)) +
           " found no counterexample but " + class_name(st.plain) +
           " was falsified at an interior delta with distinct points");
  }
  return out;
}

TripleEval eval_triple(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                       ConvexClass cls, const Point& r, const Point& t,
                       double delta) {
  TripleEval te;
  te.combo = combination_point(r, t, delta, g);
  te.in_domain = M.contains(te.combo);
  if (!te.in_domain) return te;
  const double lhs = phi(te.combo);
  const double pr = phi(r), pt = phi(t);
  const detail::ClassTraits tr = detail::class_traits(cls);
  te.rhs = tr.quasi ? (tr.concave ? x_min(pr, pt) : x_max(pr, pt))
                    : xlerp(pt, pr, delta);
  te.lhs = lhs;
  te.gap = tr.concave ? te.rhs - lhs : lhs - te.rhs;
  return te;
}

WitnessCheck verify_witness(const ScalarFn& phi, const GMap& g,
                            const DomainSet& M, const Tolerances& tol,
                            ConvexClass cls, const Witness& w) {
  WitnessCheck out;
  out.recomputed_combo = combination_point(w.r, w.t, w.delta, g);
  bool combo_ok = out.recomputed_combo.size() == w.combo.size();
  if (combo_ok)
    for (std::size_t a = 0; a < w.combo.size(); ++a)
      combo_ok = combo_ok && within_ulps(out.recomputed_combo[a], w.combo[a], 1);
  out.combo_matches = combo_ok;

  std::ostringstream detail_msg;
  if (w.kind == WitnessKind::DomainEscape) {
    const bool inside = M.contains(out.recomputed_combo);
    out.recomputed_gap = inside ? 0.0 : M.distance(out.recomputed_combo);
    out.gap_matches = within_ulps(out.recomputed_gap, w.gap, 4);
    out.violates = !inside;
    detail_msg << (inside ? "recomputed combo stays inside the domain"
                          : "recomputed combo leaves the domain");
  } else {
    if (!M.contains(out.recomputed_combo)) {
      out.violates = false;
      out.detail = "recomputed combo leaves the domain";
      return out;
    }
    const double lhs = phi(out.recomputed_combo);
    const double pr = phi(w.r), pt = phi(w.t);
    const detail::ClassTraits tr = detail::class_traits(cls);
    const double rhs = tr.quasi
                           ? (tr.concave ? x_min(pr, pt) : x_max(pr, pt))
                           : xlerp(pt, pr, w.delta);
    out.recomputed_gap = tr.concave ? rhs - lhs : lhs - rhs;
    out.gap_matches = within_ulps(out.recomputed_gap, w.gap, 4);
    bool quantified = true;
    if (tr.interior) {
      if (!(w.delta > 0.0 && w.delta < 1.0)) quantified = false;
      if (w.r == w.t) quantified = false;
    }
    if ((cls == ConvexClass::SemistrictlyQuasiXConvex ||
         cls == ConvexClass::SemistrictlyQuasiXConcave) &&
        !(std::fabs(pr - pt) > tol.eps_val_eq))
      quantified = false;
    const double threshold =
        is_strict_class(cls) ? -tol.eps_strict : tol.eps_ineq;
    out.violates = quantified && out.recomputed_gap > threshold;
    if (!quantified)
      detail_msg << "triple is outside the class quantifier";
    else if (out.violates)
      detail_msg << "recomputed gap still violates the class inequality";
    else
      detail_msg << "recomputed gap does not violate the class inequality";
  }
  out.detail = detail_msg.str();
  return out;
}

}  // namespace xconvex
