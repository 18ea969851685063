#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xconvex/checker.hpp"
#include "xconvex/fn.hpp"
#include "xconvex/harness.hpp"

namespace xconvex {

// Best sampled point; ties on value keep the lexicographically smallest point.
struct MinResult {
  Point point;
  double value = 0.0;
  std::size_t index = 0;  // position in the sorted sample list
};

MinResult global_min_search(const ScalarFn& phi, const DomainSet& M,
                            const SamplePlan& plan);

// Sampled nu-local minima: r such that phi(r) <= phi(t) (strict: <) for every
// other sampled t with ||t - r|| < nu. Comparisons are exact. Returned in
// sample order.
std::vector<Point> local_minima(const ScalarFn& phi, const DomainSet& M,
                                const SamplePlan& plan, double nu,
                                bool strict = false);

// Largest ||delta*(s - r) + g(r) - r|| over sampled pairs and the delta grid.
// holds_on_samples is the strict comparison max_observed < nu.
struct BallCondition {
  double nu = 0.0;
  double max_observed = 0.0;
  bool holds_on_samples = false;
};
BallCondition check_ball_condition(const DomainSet& M, const GMap& g,
                                   const SamplePlan& plan, double nu);

// Local-implies-global on the sampled scale. Modes:
//   xconvex     hypothesis X-convex; every nu-local minimum must match the
//               global sampled minimum within eps_ineq. When the strict class
//               also passes, the sampled argmin set must be a single point.
//   quasi_strict  hypothesis quasi; strict nu-local minima must match the
//               global minimum within eps_ineq.
//   semistrict  hypothesis semistrictly quasi; nu-local minima must match the
//               global minimum within eps_ineq.
// The ball condition is checked first; when it fails, or the hypothesis class
// falsifies, the report is skipped rather than red.
enum class LocalGlobalMode { XConvex, QuasiStrict, Semistrict };
HarnessReport local_global_harness(const ScalarFn& phi, const GMap& g,
                                   const DomainSet& M, const SamplePlan& plan,
                                   const Tolerances& tol, double nu,
                                   LocalGlobalMode mode);

// The sampled minimum set G = {r : phi(r) <= min + eps_ineq} must be closed
// under combinations: for every pair in G and every delta, the combination
// point must lie in M with value at most min + eps_ineq. Value violations and
// domain escapes are distinct red events; escapes carry a distance witness.
// hypothesis picks the class gate (XConvex or QuasiXConvex).
HarnessReport minimum_set_x_convex_harness(const ScalarFn& phi, const GMap& g,
                                           const DomainSet& M,
                                           const SamplePlan& plan,
                                           const Tolerances& tol,
                                           ConvexClass hypothesis);

// Strictly quasi hypothesis forces a unique sampled argmin (within eps_ineq).
HarnessReport uniqueness_harness(const ScalarFn& phi, const GMap& g,
                                 const DomainSet& M, const SamplePlan& plan,
                                 const Tolerances& tol);

// Vector objective sharing one map g. All components must agree on dim.
struct ObjectiveVector {
  std::vector<ScalarFn> components;
  GMap g;
};

// Componentwise order cones: AMinusZero is "<= everywhere, < somewhere",
// APrime is "< everywhere". Comparisons are exact.
enum class OrderCone { AMinusZero, APrime };
bool dominates(std::span<const double> a, std::span<const double> b,
               OrderCone cone);

// Per-sample efficiency flags with the first sampled dominator (in sample
// order) explaining the strongest failed flag.
struct EfficiencyVerdict {
  Point r;
  std::vector<double> phi;
  bool global_efficient = false;
  bool local_efficient = false;
  bool global_weakly = false;
  bool local_weakly = false;
  std::optional<Point> dominator;
};
std::vector<EfficiencyVerdict> efficiency_scan(const ObjectiveVector& Phi,
                                               const DomainSet& M,
                                               const SamplePlan& plan,
                                               double nu);

// Efficiency properties over the sampled scan:
//   t53  all components quasi and semistrict; local efficient => efficient
//   t54  all quasi, mu >= 0 weights with mu_k > 0 for some strictly quasi
//        component; nu-local minima of mu.phi are efficient
//   t55  all quasi, at least one strictly quasi; local efficient => efficient
//   t56  all semistrict; local weakly efficient => weakly efficient
//   t57  all semistrict, mu >= 0 with some mu_k > 0; nu-local minima of
//        mu.phi are weakly efficient
// Failed hypothesis checks skip the report. When every weight is positive the
// scalarization consistency fact (sampled minima of mu.phi are efficient) is
// asserted as well.
HarnessReport efficiency_theorem_harness(const ObjectiveVector& Phi,
                                         const DomainSet& M,
                                         const SamplePlan& plan,
                                         const Tolerances& tol, double nu,
                                         const std::string& theorem_id,
                                         std::span<const double> mu = {});

}  // namespace xconvex
