#include "xconvex/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "xconvex/algebra.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"
#include "xconvex/parallel.hpp"
#include "kernel.hpp"

namespace xconvex {
namespace {

std::vector<Point> sampled_points(const DomainSet& M, const SamplePlan& plan,
                                  std::span<const ScalarFn> fns, const GMap* g) {
  SamplePlan p = plan;
  enrich_plan(p, M, fns, g);
  return sample_points(M, p);
}

std::vector<double> values_of(const ScalarFn& phi,
                              const std::vector<Point>& pts) {
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = phi(pts[i]);
  return vals;
}

double dist_between(const Point& a, const Point& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Strictly-smaller scan; the sample list is sorted, so the first minimum is
// the lexicographically smallest argmin.
std::size_t argmin_index(const std::vector<double>& vals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  return best;
}

std::vector<std::size_t> local_min_indices(const std::vector<Point>& pts,
                                           const std::vector<double>& vals,
                                           double nu, bool strict) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < pts.size() && ok; ++j) {
      if (j == i) continue;
      if (dist_between(pts[j], pts[i]) >= nu) continue;
      if (strict ? vals[j] <= vals[i] : vals[j] < vals[i]) ok = false;
    }
    if (ok) out.push_back(i);
  }
  return out;
}

std::string fmt_point(const Point& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) s += ", ";
    s += format_double(p[k]);
  }
  return s + ")";
}

}  // namespace

MinResult global_min_search(const ScalarFn& phi, const DomainSet& M,
                            const SamplePlan& plan) {
  std::vector<Point> pts =
      sampled_points(M, plan, std::span<const ScalarFn>(&phi, 1), nullptr);
  if (pts.empty()) throw InputError("the plan produced no sampled points");
  std::vector<double> vals = values_of(phi, pts);
  std::size_t i = argmin_index(vals);
  return {pts[i], vals[i], i};
}

std::vector<Point> local_minima(const ScalarFn& phi, const DomainSet& M,
                                const SamplePlan& plan, double nu,
                                bool strict) {
  std::vector<Point> pts =
      sampled_points(M, plan, std::span<const ScalarFn>(&phi, 1), nullptr);
  std::vector<double> vals = values_of(phi, pts);
  std::vector<Point> out;
  for (std::size_t i : local_min_indices(pts, vals, nu, strict))
    out.push_back(pts[i]);
  return out;
}

BallCondition check_ball_condition(const DomainSet& M, const GMap& g,
                                   const SamplePlan& plan, double nu) {
  std::vector<Point> pts = sampled_points(M, plan, {}, &g);
  std::vector<double> deltas = delta_samples(plan);
  const std::size_t n = pts.size();
  const int dim = M.dim;

  std::vector<double> off(n * static_cast<std::size_t>(dim));
  Point gx(static_cast<std::size_t>(dim));
  for (std::size_t j = 0; j < n; ++j) {
    g.eval(pts[j], gx);
    for (int a = 0; a < dim; ++a)
      off[j * dim + a] = gx[static_cast<std::size_t>(a)] -
                         pts[j][static_cast<std::size_t>(a)];
  }

  int workers = worker_count();
  if (static_cast<std::size_t>(workers) > n && n > 0)
    workers = static_cast<int>(n);
  std::vector<double> part(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
  parallel_blocks(n, [&](int w, std::size_t ib, std::size_t ie) {
    double best = 0.0;
    for (std::size_t is = ib; is < ie; ++is) {
      const Point& s = pts[is];
      for (std::size_t ir = 0; ir < n; ++ir) {
        const Point& r = pts[ir];
        const double* off_r = off.data() + ir * dim;
        for (double delta : deltas) {
          double acc = 0.0;
          for (int a = 0; a < dim; ++a) {
            double c = xlerp(r[static_cast<std::size_t>(a)],
                             s[static_cast<std::size_t>(a)], delta) +
                       off_r[a];
            double wv = c - r[static_cast<std::size_t>(a)];
            acc += wv * wv;
          }
          double norm = std::sqrt(acc);
          if (norm > best) best = norm;
        }
      }
    }
    part[static_cast<std::size_t>(w)] = best;
  });
  double max_obs = 0.0;
  for (double b : part) max_obs = std::max(max_obs, b);

  BallCondition out;
  out.nu = nu;
  out.max_observed = canonical_zero(max_obs);
  out.holds_on_samples = max_obs < nu;
  return out;
}

HarnessReport local_global_harness(const ScalarFn& phi, const GMap& g,
                                   const DomainSet& M, const SamplePlan& plan,
                                   const Tolerances& tol, double nu,
                                   LocalGlobalMode mode) {
  HarnessReport rep;
  rep.id = "local_global";
  rep.kind = "local_global";

  SamplePlan p = plan;
  enrich_plan(p, M, std::span<const ScalarFn>(&phi, 1), &g);

  BallCondition ball = check_ball_condition(M, g, p, nu);
  rep.metrics["nu"] = nu;
  rep.metrics["ball_max"] = ball.max_observed;
  if (!ball.holds_on_samples)
    rep.skip("ball condition fails: largest reachable offset " +
             format_double(ball.max_observed) + " is not below nu");

  ConvexClass hyp_class = ConvexClass::XConvex;
  bool strict_minima = false;
  switch (mode) {
    case LocalGlobalMode::XConvex:
      hyp_class = ConvexClass::XConvex;
      break;
    case LocalGlobalMode::QuasiStrict:
      hyp_class = ConvexClass::QuasiXConvex;
      strict_minima = true;
      break;
    case LocalGlobalMode::Semistrict:
      hyp_class = ConvexClass::SemistrictlyQuasiXConvex;
      break;
  }
  ClassVerdict hyp = check_class(phi, g, M, p, tol, hyp_class);
  if (hyp.status != VerdictStatus::NoCounterexampleFound)
    rep.skip("hypothesis class " + hyp.class_name + " did not pass");
  rep.verdicts.emplace_back("hypothesis", std::move(hyp));

  bool assert_unique = false;
  if (mode == LocalGlobalMode::XConvex) {
    ClassVerdict strict = check_class(phi, g, M, p, tol,
                                      ConvexClass::StrictlyXConvex);
    assert_unique =
        strict.status == VerdictStatus::NoCounterexampleFound;
    if (!assert_unique)
      rep.notes.push_back("strict variant did not pass; uniqueness not asserted");
    rep.verdicts.emplace_back("strict_hypothesis", std::move(strict));
  }
  if (rep.skipped) return rep;

  std::vector<Point> pts = sample_points(M, p);
  if (pts.empty()) {
    rep.skip("the plan produced no sampled points");
    return rep;
  }
  std::vector<double> vals = values_of(phi, pts);
  std::size_t mi = argmin_index(vals);
  std::vector<std::size_t> locals =
      local_min_indices(pts, vals, nu, strict_minima);
  rep.metrics["min_value"] = vals[mi];
  rep.metrics["local_count"] = static_cast<double>(locals.size());

  for (std::size_t i : locals)
    if (vals[i] > vals[mi] + tol.eps_ineq) {
      rep.red("local minimum at " + fmt_point(pts[i]) + " with value " +
              format_double(vals[i]) +
              " exceeds the sampled global minimum " + format_double(vals[mi]));
      break;
    }

  if (assert_unique) {
    std::size_t argmins = 0;
    for (double v : vals)
      if (v <= vals[mi] + tol.eps_ineq) ++argmins;
    rep.metrics["argmin_count"] = static_cast<double>(argmins);
    if (argmins != 1)
      rep.red("strict hypothesis passed but the sampled argmin set has " +
              std::to_string(argmins) + " points");
  }
  return rep;
}

HarnessReport minimum_set_x_convex_harness(const ScalarFn& phi, const GMap& g,
                                           const DomainSet& M,
                                           const SamplePlan& plan,
                                           const Tolerances& tol,
                                           ConvexClass hypothesis) {
  if (hypothesis != ConvexClass::XConvex &&
      hypothesis != ConvexClass::QuasiXConvex)
    throw InputError("minimum-set hypothesis must be x_convex or quasi");

  HarnessReport rep;
  rep.id = "minimum_set";
  rep.kind = "minimum_set";

  ClassVerdict hyp = check_class(phi, g, M, plan, tol, hypothesis);
  if (hyp.status != VerdictStatus::NoCounterexampleFound)
    rep.skip("hypothesis class " + hyp.class_name + " did not pass");
  rep.verdicts.emplace_back("hypothesis", std::move(hyp));

  detail::ScanContext cx =
      detail::make_context(M, g, &phi, plan, tol.eps_val_eq);
  if (cx.samples.empty()) {
    rep.skip("the plan produced no sampled points");
    return rep;
  }
  std::size_t mi = argmin_index(cx.phi_vals);
  double minv = cx.phi_vals[mi];
  std::vector<std::uint32_t> G;
  for (std::size_t i = 0; i < cx.phi_vals.size(); ++i)
    if (cx.phi_vals[i] <= minv + tol.eps_ineq)
      G.push_back(static_cast<std::uint32_t>(i));
  rep.metrics["min_value"] = minv;
  rep.metrics["argmin_count"] = static_cast<double>(G.size());
  if (rep.skipped) return rep;

  detail::ClassAcc val;
  detail::EscapeAcc esc;
  for (std::uint32_t i : G)
    for (std::uint32_t j : G)
      for (double delta : cx.deltas) {
        detail::TripleOut to =
            detail::eval_triple_raw(cx, ConvexClass::XConvex, i, j, delta);
        if (!to.in_domain) {
          esc.offer(to.dist, i, j);
          ++esc.escapes;
        } else if (to.lhs > minv + tol.eps_ineq) {
          val.offer(to.lhs - minv, i, j);
          ++val.triples;
        }
      }
  rep.metrics["escapes"] = static_cast<double>(esc.escapes);

  auto relocated = [&](std::uint32_t i, std::uint32_t j, bool escape,
                       double want) {
    for (double delta : cx.deltas) {
      detail::TripleOut to =
          detail::eval_triple_raw(cx, ConvexClass::XConvex, i, j, delta);
      Witness w;
      if (escape) {
        if (to.in_domain || to.dist != want) continue;
        w.lhs = to.dist;
        w.rhs = 0.0;
        w.gap = to.dist;
        w.kind = WitnessKind::DomainEscape;
      } else {
        if (!to.in_domain || to.lhs - minv != want) continue;
        w.lhs = to.lhs;
        w.rhs = minv;
        w.gap = want;
        w.kind = WitnessKind::InequalityViolation;
      }
      w.r = cx.samples[i];
      w.t = cx.samples[j];
      w.delta = delta;
      w.combo = to.combo;
      return w;
    }
    throw InputError("minimum-set witness relocation failed");
  };

  if (esc.escapes > 0) {
    rep.red("a combination of sampled minimizers left the domain (distance " +
            format_double(esc.best) + "), so the minimum set is not closed "
            "under combinations");
    rep.red_witnesses.push_back(relocated(esc.bi, esc.bj, true, esc.best));
  }
  if (val.triples > 0) {
    rep.red("a combination of sampled minimizers has value above the sampled "
            "minimum by " + format_double(val.best));
    rep.red_witnesses.push_back(relocated(val.bi, val.bj, false, val.best));
  }
  return rep;
}

HarnessReport uniqueness_harness(const ScalarFn& phi, const GMap& g,
                                 const DomainSet& M, const SamplePlan& plan,
                                 const Tolerances& tol) {
  HarnessReport rep;
  rep.id = "uniqueness";
  rep.kind = "uniqueness";

  SamplePlan p = plan;
  enrich_plan(p, M, std::span<const ScalarFn>(&phi, 1), &g);

  ClassVerdict hyp =
      check_class(phi, g, M, p, tol, ConvexClass::StrictlyQuasiXConvex);
  if (hyp.status != VerdictStatus::NoCounterexampleFound)
    rep.skip("hypothesis class " + hyp.class_name + " did not pass");
  rep.verdicts.emplace_back("hypothesis", std::move(hyp));

  std::vector<Point> pts = sample_points(M, p);
  if (pts.empty()) {
    rep.skip("the plan produced no sampled points");
    return rep;
  }
  std::vector<double> vals = values_of(phi, pts);
  std::size_t mi = argmin_index(vals);
  std::vector<std::size_t> argmins;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] <= vals[mi] + tol.eps_ineq) argmins.push_back(i);
  rep.metrics["min_value"] = vals[mi];
  rep.metrics["argmin_count"] = static_cast<double>(argmins.size());
  if (rep.skipped) return rep;

  if (argmins.size() != 1) {
    std::string note = "expected a unique sampled argmin, found " +
                       std::to_string(argmins.size()) + ":";
    for (std::size_t k = 0; k < argmins.size() && k < 4; ++k)
      note += " " + fmt_point(pts[argmins[k]]);
    rep.red(std::move(note));
  }
  return rep;
}

bool dominates(std::span<const double> a, std::span<const double> b,
               OrderCone cone) {
  if (a.size() != b.size())
    throw InputError("dominance needs vectors of equal length");
  if (cone == OrderCone::APrime) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (!(a[k] < b[k])) return false;
    return true;
  }
  bool some_strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] <= b[k])) return false;
    if (a[k] < b[k]) some_strict = true;
  }
  return some_strict;
}

namespace {

void validate_objectives(const ObjectiveVector& Phi, const DomainSet& M) {
  if (Phi.components.empty())
    throw InputError("the objective vector has no components");
  for (const ScalarFn& f : Phi.components)
    if (f.dim != M.dim)
      throw InputError("objective dimension does not match the domain");
  if (Phi.g.dim != M.dim)
    throw InputError("map dimension does not match the domain");
}

}  // namespace

std::vector<EfficiencyVerdict> efficiency_scan(const ObjectiveVector& Phi,
                                               const DomainSet& M,
                                               const SamplePlan& plan,
                                               double nu) {
  validate_objectives(Phi, M);
  std::vector<Point> pts = sampled_points(M, plan, Phi.components, &Phi.g);
  const std::size_t n = pts.size();
  const std::size_t p = Phi.components.size();

  std::vector<std::vector<double>> vv(n, std::vector<double>(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < p; ++k)
      vv[i][k] = Phi.components[k](pts[i]);

  std::vector<EfficiencyVerdict> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    EfficiencyVerdict& e = out[i];
    e.r = pts[i];
    e.phi = vv[i];
    e.global_efficient = e.local_efficient = true;
    e.global_weakly = e.local_weakly = true;
    std::optional<std::size_t> first_strong;
    for (std::size_t j = 0; j < n; ++j) {
      bool strong = dominates(vv[j], vv[i], OrderCone::AMinusZero);
      if (!strong) continue;  // a weak dominator is also a strong one
      bool weak = dominates(vv[j], vv[i], OrderCone::APrime);
      bool local = dist_between(pts[j], pts[i]) < nu;
      if (!first_strong) first_strong = j;
      e.global_efficient = false;
      if (local) e.local_efficient = false;
      if (weak) {
        e.global_weakly = false;
        if (local) e.local_weakly = false;
      }
    }
    if (first_strong) e.dominator = pts[*first_strong];
  }
  return out;
}

HarnessReport efficiency_theorem_harness(const ObjectiveVector& Phi,
                                         const DomainSet& M,
                                         const SamplePlan& plan,
                                         const Tolerances& tol, double nu,
                                         const std::string& theorem_id,
                                         std::span<const double> mu) {
  validate_objectives(Phi, M);
  const std::size_t p = Phi.components.size();
  const bool with_mu = theorem_id == "t54" || theorem_id == "t57";
  const bool want_quasi =
      theorem_id == "t53" || theorem_id == "t54" || theorem_id == "t55";
  const bool want_semistrict =
      theorem_id == "t53" || theorem_id == "t56" || theorem_id == "t57";
  const bool want_one_strict = theorem_id == "t54" || theorem_id == "t55";
  if (!with_mu && !want_quasi && !want_semistrict)
    throw InputError("unknown efficiency property id '" + theorem_id + "'");
  if (with_mu) {
    if (mu.size() != p)
      throw InputError(theorem_id + " needs one weight per component");
    bool some_positive = false;
    for (double m : mu) {
      if (!(m >= 0.0)) throw InputError("weights must be nonnegative");
      if (m > 0.0) some_positive = true;
    }
    if (!some_positive)
      throw InputError("at least one weight must be positive");
  }

  HarnessReport rep;
  rep.id = theorem_id;
  rep.kind = "efficiency";
  rep.metrics["nu"] = nu;

  auto component_check = [&](std::size_t k, ConvexClass cls) {
    ClassVerdict v =
        check_class(Phi.components[k], Phi.g, M, plan, tol, cls);
    bool ok = v.status == VerdictStatus::NoCounterexampleFound;
    rep.verdicts.emplace_back(
        "phi" + std::to_string(k + 1) + " " + std::string(class_name(cls)),
        std::move(v));
    return ok;
  };

  std::vector<bool> strict_ok(p, false);
  for (std::size_t k = 0; k < p; ++k) {
    if (want_quasi && !component_check(k, ConvexClass::QuasiXConvex))
      rep.skip("component " + std::to_string(k + 1) + " is not quasi");
    if (want_semistrict &&
        !component_check(k, ConvexClass::SemistrictlyQuasiXConvex))
      rep.skip("component " + std::to_string(k + 1) + " is not semistrict");
    if (want_one_strict)
      strict_ok[k] = component_check(k, ConvexClass::StrictlyQuasiXConvex);
  }
  if (want_one_strict) {
    bool found = false;
    for (std::size_t k = 0; k < p; ++k) {
      if (!strict_ok[k]) continue;
      if (theorem_id == "t54" && !(mu[k] > 0.0)) continue;
      found = true;
      break;
    }
    if (!found)
      rep.skip(theorem_id == "t54"
                   ? "no positively weighted component passes the strict check"
                   : "no component passes the strict check");
  }
  if (rep.skipped) return rep;

  std::vector<EfficiencyVerdict> scan = efficiency_scan(Phi, M, plan, nu);

  auto scan_red = [&](bool weakly) {
    std::size_t bad = 0;
    std::string first;
    for (const EfficiencyVerdict& e : scan) {
      bool local = weakly ? e.local_weakly : e.local_efficient;
      bool global = weakly ? e.global_weakly : e.global_efficient;
      if (local && !global) {
        if (bad == 0) {
          first = "locally " + std::string(weakly ? "weakly " : "") +
                  "efficient point " + fmt_point(e.r) + " is dominated";
          if (e.dominator) first += " by " + fmt_point(*e.dominator);
        }
        ++bad;
      }
    }
    if (bad > 0)
      rep.red(first + " (" + std::to_string(bad) + " such points)");
  };

  if (theorem_id == "t53" || theorem_id == "t55") {
    scan_red(false);
  } else if (theorem_id == "t56") {
    scan_red(true);
  } else {
    ScalarFn scalar = conic(mu, Phi.components);
    std::vector<Point> pts = sampled_points(M, plan, Phi.components, &Phi.g);
    std::vector<double> svals = values_of(scalar, pts);
    std::vector<std::size_t> locals =
        local_min_indices(pts, svals, nu, false);
    rep.metrics["scalar_local_count"] = static_cast<double>(locals.size());
    bool weakly = theorem_id == "t57";
    for (std::size_t i : locals) {
      const EfficiencyVerdict& e = scan[i];
      bool global = weakly ? e.global_weakly : e.global_efficient;
      if (!global) {
        std::string note = "local minimum of the weighted sum at " +
                           fmt_point(e.r) + " is not globally " +
                           std::string(weakly ? "weakly " : "") + "efficient";
        if (e.dominator) note += "; dominated by " + fmt_point(*e.dominator);
        rep.red(std::move(note));
        break;
      }
    }

    bool all_positive = true;
    for (double m : mu)
      if (!(m > 0.0)) all_positive = false;
    if (all_positive) {
      std::size_t mi = argmin_index(svals);
      for (std::size_t i = 0; i < svals.size(); ++i) {
        if (svals[i] > svals[mi] + tol.eps_ineq) continue;
        if (!scan[i].global_efficient) {
          rep.red("scalarization consistency violated: weighted-sum minimum "
                  "at " + fmt_point(pts[i]) + " is dominated");
          break;
        }
      }
    }
  }

  std::size_t efficient = 0;
  for (const EfficiencyVerdict& e : scan)
    if (e.global_efficient) ++efficient;
  rep.metrics["sample_count"] = static_cast<double>(scan.size());
  rep.metrics["efficient_count"] = static_cast<double>(efficient);
  return rep;
}

}  // namespace xconvex
