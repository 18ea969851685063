#include "xconvex/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"
#include "xconvex/parallel.hpp"
#include "kernel.hpp"

namespace xconvex {

using detail::ClassAcc;
using detail::domain_member;
using detail::EscapeAcc;
using detail::make_context;
using detail::phi_value;
using detail::ScanContext;

namespace {

ScalarFn negate(const ScalarFn& phi) {
  return ScalarFn::make(make_unary(ExprKind::Neg, phi.body), phi.dim,
                        phi.params);
}

// Combination point of (r, t) at delta written into buf; same arithmetic as
// the class scans: clamped lerp per axis plus the precomputed offset of t.
bool combo_at(const ScanContext& cx, const Point& r, const Point& t,
              const double* off_t, double delta, Point& buf, double& dist) {
  for (int a = 0; a < cx.dim; ++a)
    buf[static_cast<std::size_t>(a)] =
        xlerp(t[static_cast<std::size_t>(a)], r[static_cast<std::size_t>(a)],
              delta) +
        off_t[a];
  return domain_member(cx, buf, dist);
}

const double* off_of(const ScanContext& cx, std::size_t j) {
  return cx.off.data() + j * static_cast<std::size_t>(cx.dim);
}

}  // namespace

GMap lifted_gmap(const GMap& base) {
  std::vector<ExprPtr> comps = base.components;
  comps.push_back(make_var(base.dim));
  return GMap::make(std::move(comps), base.params);
}

bool epigraph_member(const ScalarFn& phi, const DomainSet& M,
                     std::span<const double> x, double eta,
                     const Tolerances& tol) {
  if (static_cast<int>(x.size()) != M.dim)
    throw InputError("point dimension does not match the domain");
  if (!M.contains(x)) return false;
  return phi(x) <= eta + tol.eps_ineq;
}

ClassVerdict check_epigraph_x_convex(const ScalarFn& phi, const GMap& g,
                                     const DomainSet& M, const SamplePlan& plan,
                                     const Tolerances& tol) {
  ScanContext cx = make_context(M, g, &phi, plan, tol.eps_val_eq);
  ClassVerdict v;
  v.class_name = "epigraph_x_convex";

  const std::size_t n = cx.samples.size();
  const std::size_t D = cx.deltas.size();
  if (n == 0) {
    v.notes.push_back("no sampled points under this plan");
    return v;
  }

  double H = 1.0;
  {
    auto [mn, mx] = std::minmax_element(cx.phi_vals.begin(), cx.phi_vals.end());
    double spread = *mx - *mn;
    if (spread > 0.0) H = 2.0 * spread;
  }

  // Lifted points: each sampled x at heights phi(x), +H/2, +H. The list is
  // ordered by sample then height, which is lexicographic in (x, s).
  struct Lifted {
    std::uint32_t base;
    double s;
  };
  std::vector<Lifted> lp;
  lp.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    double base_v = cx.phi_vals[i];
    double hs[3] = {base_v, base_v + 0.5 * H, base_v + H};
    for (int k = 0; k < 3; ++k)
      if (k == 0 || hs[k] != hs[k - 1])
        lp.push_back({static_cast<std::uint32_t>(i), hs[k]});
  }
  const std::size_t m = lp.size();

  ClassAcc val;
  EscapeAcc esc;
  Point buf(static_cast<std::size_t>(cx.dim));
  for (std::size_t a = 0; a < m; ++a) {
    const Point& r = cx.samples[lp[a].base];
    for (std::size_t b = 0; b < m; ++b) {
      const Point& t = cx.samples[lp[b].base];
      const double* off_t = off_of(cx, lp[b].base);
      for (std::size_t d = 0; d < D; ++d) {
        double delta = cx.deltas[d];
        double dist;
        if (!combo_at(cx, r, t, off_t, delta, buf, dist)) {
          esc.offer(dist, static_cast<std::uint32_t>(a),
                    static_cast<std::uint32_t>(b));
          ++esc.escapes;
          continue;
        }
        double lhs = phi_value(cx, buf);
        double rhs = xlerp(lp[b].s, lp[a].s, delta);
        val.offer(lhs - rhs, static_cast<std::uint32_t>(a),
                  static_cast<std::uint32_t>(b));
        ++val.triples;
      }
    }
  }

  v.triples_checked = static_cast<std::uint64_t>(m) * m * D;
  v.combos_escaped = esc.escapes;
  if (val.triples > 0) v.worst_gap = canonical_zero(val.best);

  auto lifted_point = [&](const Lifted& q) {
    Point p = cx.samples[q.base];
    p.push_back(q.s);
    return p;
  };
  auto relocate = [&](std::uint32_t a, std::uint32_t b, bool escape,
                      double want) {
    const Point& r = cx.samples[lp[a].base];
    const Point& t = cx.samples[lp[b].base];
    const double* off_t = off_of(cx, lp[b].base);
    for (std::size_t d = 0; d < D; ++d) {
      double delta = cx.deltas[d];
      double dist;
      bool in = combo_at(cx, r, t, off_t, delta, buf, dist);
      Witness w;
      if (escape) {
        if (in || dist != want) continue;
        w.lhs = dist;
        w.rhs = 0.0;
        w.gap = dist;
        w.kind = WitnessKind::DomainEscape;
      } else {
        if (!in) continue;
        double lhs = phi_value(cx, buf);
        double rhs = xlerp(lp[b].s, lp[a].s, delta);
        if (lhs - rhs != want) continue;
        w.lhs = lhs;
        w.rhs = rhs;
        w.gap = want;
        w.kind = WitnessKind::InequalityViolation;
      }
      w.r = lifted_point(lp[a]);
      w.t = lifted_point(lp[b]);
      w.delta = delta;
      w.combo = buf;
      w.combo.push_back(xlerp(lp[b].s, lp[a].s, delta));
      return w;
    }
    throw InputError("epigraph witness relocation failed");
  };

  if (esc.escapes > 0) {
    v.status = VerdictStatus::Falsified;
    v.witness = relocate(esc.bi, esc.bj, true, esc.best);
    v.notes.push_back("a combination left the domain, so it left the epigraph");
  } else if (val.best > tol.eps_ineq) {
    v.status = VerdictStatus::Falsified;
    v.witness = relocate(val.bi, val.bj, false, val.best);
  }
  return v;
}

namespace {

// One lower-level-set verdict. The quantified pairs are the exact members
// phi <= eta; a combination fails by leaving M or by value above
// eta + eps_ineq. Escapes win the witness, as in the set check.
struct LevelScan {
  ClassAcc val;
  EscapeAcc esc;
  std::uint64_t members = 0;
  std::uint64_t triples = 0;
  std::uint64_t escaped = 0;
};

Witness relocate_level(const ScanContext& cx, std::uint32_t i, std::uint32_t j,
                       double eta, bool escape, double want) {
  const Point& r = cx.samples[i];
  const Point& t = cx.samples[j];
  const double* off_t = off_of(cx, j);
  Point buf(static_cast<std::size_t>(cx.dim));
  for (double delta : cx.deltas) {
    double dist;
    bool in = combo_at(cx, r, t, off_t, delta, buf, dist);
    Witness w;
    if (escape) {
      if (in || dist != want) continue;
      w.lhs = dist;
      w.rhs = 0.0;
      w.gap = dist;
      w.kind = WitnessKind::DomainEscape;
    } else {
      if (!in) continue;
      double lhs = phi_value(cx, buf);
      if (lhs - eta != want) continue;
      w.lhs = lhs;
      w.rhs = eta;
      w.gap = want;
      w.kind = WitnessKind::InequalityViolation;
    }
    w.r = r;
    w.t = t;
    w.delta = delta;
    w.combo = buf;
    return w;
  }
  throw InputError("level-set witness relocation failed");
}

LevelSetVerdict level_verdict(const ScanContext& cx, double eta,
                              const LevelScan& s, const Tolerances& tol) {
  LevelSetVerdict out;
  out.eta = eta;
  ClassVerdict& v = out.verdict;
  v.class_name = "levelset_x_convex";
  v.triples_checked = s.triples;
  v.combos_escaped = s.escaped;
  if (s.members == 0) {
    v.notes.push_back("level set is empty on this plan");
    return out;
  }
  if (s.triples > s.escaped) v.worst_gap = canonical_zero(s.val.best);
  if (s.escaped > 0) {
    v.status = VerdictStatus::Falsified;
    v.witness = relocate_level(cx, s.esc.bi, s.esc.bj, eta, true, s.esc.best);
    v.notes.push_back(
        "a combination left the domain, so it left the level set");
  } else if (s.val.best > tol.eps_ineq) {
    v.status = VerdictStatus::Falsified;
    v.witness = relocate_level(cx, s.val.bi, s.val.bj, eta, false, s.val.best);
  }
  return out;
}

}  // namespace

LevelSetVerdict check_levelset_x_convex(const ScalarFn& phi, const GMap& g,
                                        const DomainSet& M, double eta,
                                        const SamplePlan& plan,
                                        const Tolerances& tol) {
  ScanContext cx = make_context(M, g, &phi, plan, tol.eps_val_eq);
  const std::size_t n = cx.samples.size();
  const std::size_t D = cx.deltas.size();

  std::vector<std::uint32_t> members;
  for (std::size_t i = 0; i < n; ++i)
    if (cx.phi_vals[i] <= eta) members.push_back(static_cast<std::uint32_t>(i));

  LevelScan s;
  s.members = members.size();
  s.triples = static_cast<std::uint64_t>(members.size()) * members.size() * D;
  Point buf(static_cast<std::size_t>(cx.dim));
  for (std::uint32_t i : members) {
    const Point& r = cx.samples[i];
    for (std::uint32_t j : members) {
      const Point& t = cx.samples[j];
      const double* off_t = off_of(cx, j);
      for (double delta : cx.deltas) {
        double dist;
        if (!combo_at(cx, r, t, off_t, delta, buf, dist)) {
          s.esc.offer(dist, i, j);
          ++s.escaped;
          continue;
        }
        s.val.offer(phi_value(cx, buf) - eta, i, j);
      }
    }
  }
  return level_verdict(cx, eta, s, tol);
}

namespace {

// Per ordered pair: the largest in-domain value of phi at a combination over
// the whole delta grid, the escape count, and the largest escape distance.
// Built once, then every level verdict is an O(n^2) pass over it.
struct PairCache {
  double l_max;
  double d_max;
  std::uint32_t esc;
};

std::vector<PairCache> build_pair_cache(const ScanContext& cx) {
  const std::size_t n = cx.samples.size();
  if (n > 14000)
    throw InputError("plan too large for the level-set harness");
  std::vector<PairCache> cache(n * n);
  parallel_blocks(n, [&](int, std::size_t ib, std::size_t ie) {
    Point buf(static_cast<std::size_t>(cx.dim));
    for (std::size_t i = ib; i < ie; ++i) {
      const Point& r = cx.samples[i];
      for (std::size_t j = 0; j < n; ++j) {
        const Point& t = cx.samples[j];
        const double* off_t = off_of(cx, j);
        PairCache pc{-HUGE_VAL, -HUGE_VAL, 0};
        for (double delta : cx.deltas) {
          double dist;
          if (!combo_at(cx, r, t, off_t, delta, buf, dist)) {
            ++pc.esc;
            if (dist > pc.d_max) pc.d_max = dist;
            continue;
          }
          double lhs = phi_value(cx, buf);
          if (lhs > pc.l_max) pc.l_max = lhs;
        }
        cache[i * n + j] = pc;
      }
    }
  });
  return cache;
}

LevelSetVerdict level_from_cache(const ScanContext& cx,
                                 const std::vector<PairCache>& cache,
                                 double eta, const Tolerances& tol) {
  const std::size_t n = cx.samples.size();
  const std::size_t D = cx.deltas.size();
  LevelScan s;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cx.phi_vals[i] <= eta)) continue;
    ++s.members;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cx.phi_vals[j] <= eta)) continue;
      const PairCache& pc = cache[i * n + j];
      s.triples += D;
      s.escaped += pc.esc;
      if (pc.esc > 0)
        s.esc.offer(pc.d_max, static_cast<std::uint32_t>(i),
                    static_cast<std::uint32_t>(j));
      if (pc.l_max != -HUGE_VAL)
        s.val.offer(pc.l_max - eta, static_cast<std::uint32_t>(i),
                    static_cast<std::uint32_t>(j));
    }
  }
  return level_verdict(cx, eta, s, tol);
}

}  // namespace

HarnessReport quasi_iff_levelsets_harness(const ScalarFn& phi, const GMap& g,
                                          const DomainSet& M,
                                          const SamplePlan& plan,
                                          const Tolerances& tol,
                                          std::vector<double> eta_grid) {
  HarnessReport rep;
  rep.id = "levelsets";
  rep.kind = "levelsets";

  ClassVerdict quasi = check_quasi_x_convex(phi, g, M, plan, tol);
  ScanContext cx = make_context(M, g, &phi, plan, tol.eps_val_eq);

  if (eta_grid.empty()) {
    std::vector<double> vals = cx.phi_vals;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.size() <= 25) {
      eta_grid = vals;
    } else {
      for (int k = 0; k < 25; ++k) {
        std::size_t idx = (k * (vals.size() - 1)) / 24;
        eta_grid.push_back(vals[idx]);
      }
    }
  }
  if (quasi.status == VerdictStatus::Falsified && quasi.witness)
    eta_grid.push_back(quasi.witness->rhs);  // the max-side level must fail
  std::sort(eta_grid.begin(), eta_grid.end());
  eta_grid.erase(std::unique(eta_grid.begin(), eta_grid.end()),
                 eta_grid.end());

  std::vector<PairCache> cache = build_pair_cache(cx);

  bool all_pass = true;
  bool escape_failures = false;
  std::string first_fail;
  std::optional<Witness> fail_witness;
  rep.verdicts.emplace_back("quasi", quasi);
  for (double eta : eta_grid) {
    LevelSetVerdict lv = level_from_cache(cx, cache, eta, tol);
    std::string label = "eta=" + format_double(eta);
    if (lv.verdict.status == VerdictStatus::Falsified) {
      if (all_pass) {
        first_fail = label;
        fail_witness = lv.verdict.witness;
      }
      all_pass = false;
      if (lv.verdict.combos_escaped > 0) escape_failures = true;
    }
    rep.verdicts.emplace_back(std::move(label), std::move(lv.verdict));
  }
  rep.metrics["levels"] = static_cast<double>(eta_grid.size());

  if (quasi.status == VerdictStatus::DomainEscape) {
    rep.skip("every quantified combination escaped; nothing to compare");
    return rep;
  }
  bool quasi_pass = quasi.status == VerdictStatus::NoCounterexampleFound;
  if (quasi_pass && !all_pass) {
    rep.red("quasi passed but level " + first_fail + " failed");
    if (escape_failures)
      rep.red_notes.push_back(
          "the failing level involves domain escapes the class check skips");
    if (fail_witness) rep.red_witnesses.push_back(*fail_witness);
  } else if (!quasi_pass && all_pass) {
    rep.red("quasi falsified but every sampled level passed");
    if (quasi.witness) rep.red_witnesses.push_back(*quasi.witness);
  }
  return rep;
}

ClassVerdict check_hypograph_x_concave(const ScalarFn& phi, const GMap& g,
                                       const DomainSet& M, const SamplePlan& plan,
                                       const Tolerances& tol) {
  ClassVerdict v = check_epigraph_x_convex(negate(phi), g, M, plan, tol);
  v.class_name = "hypograph_x_concave";
  v.notes.push_back(
      "checked as the epigraph of the negated function; heights are mirrored");
  return v;
}

LevelSetVerdict check_upper_levelset_x_concave(const ScalarFn& phi, const GMap& g,
                                               const DomainSet& M, double eta,
                                               const SamplePlan& plan,
                                               const Tolerances& tol) {
  LevelSetVerdict lv =
      check_levelset_x_convex(negate(phi), g, M, -eta, plan, tol);
  lv.eta = eta;
  lv.verdict.class_name = "upper_levelset_x_concave";
  lv.verdict.notes.push_back(
      "checked as a lower level set of the negated function at the negated "
      "level; witness values are mirrored");
  return lv;
}

}  // namespace xconvex
