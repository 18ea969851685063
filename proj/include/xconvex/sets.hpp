#pragma once

#include <span>
#include <string>
#include <vector>

#include "xconvex/checker.hpp"
#include "xconvex/fn.hpp"
#include "xconvex/harness.hpp"

namespace xconvex {

// Lifts g to graph space: (x, s) -> (g(x), s). The extra coordinate passes
// through unchanged, so combination points combine the scalar part by plain
// interpolation.
GMap lifted_gmap(const GMap& base);

// x in M and phi(x) <= eta + eps_ineq.
bool epigraph_member(const ScalarFn& phi, const DomainSet& M,
                     std::span<const double> x, double eta,
                     const Tolerances& tol);

// Convexity-style check of the epigraph under the lifted map. Lifted sample
// points pair each sampled x with heights {phi(x), phi(x)+H/2, phi(x)+H}
// where H is twice the spread of phi over the samples (1.0 when phi is
// constant so the vertical direction is exercised at all). A combination
// violates when its x-part leaves M, or its value exceeds the interpolated
// height by more than eps_ineq. Escapes take priority in the reported
// witness; witnesses live in the lifted space (dim+1 coordinates).
ClassVerdict check_epigraph_x_convex(const ScalarFn& phi, const GMap& g,
                                     const DomainSet& M, const SamplePlan& plan,
                                     const Tolerances& tol);

struct LevelSetVerdict {
  double eta = 0.0;
  ClassVerdict verdict;
};

// Convexity-style check of the lower level set {x in M : phi(x) <= eta}.
// Membership is exact; pairs are restricted to members and a combination
// violates when it leaves M or its value exceeds eta + eps_ineq. An empty
// level set passes vacuously with zero triples.
LevelSetVerdict check_levelset_x_convex(const ScalarFn& phi, const GMap& g,
                                        const DomainSet& M, double eta,
                                        const SamplePlan& plan,
                                        const Tolerances& tol);

// Both directions of "quasi iff every lower level set is closed under
// combinations", on the sampled scale. eta_grid empty means: quantiles of the
// distinct sampled values of phi, at most 25 of them, plus the max-side value
// of the quasi witness when the quasi check falsifies (that level must fail
// for the biconditional to hold). Red events: quasi passes but some level
// fails, or quasi falsifies but every level passes. Runs one pair scan and
// reuses it across levels, so memory is O(N^2) in the sample count.
HarnessReport quasi_iff_levelsets_harness(const ScalarFn& phi, const GMap& g,
                                          const DomainSet& M,
                                          const SamplePlan& plan,
                                          const Tolerances& tol,
                                          std::vector<double> eta_grid = {});

// Upper level sets and hypographs via negation, for symmetry with the
// concave classes.
ClassVerdict check_hypograph_x_concave(const ScalarFn& phi, const GMap& g,
                                       const DomainSet& M, const SamplePlan& plan,
                                       const Tolerances& tol);
LevelSetVerdict check_upper_levelset_x_concave(const ScalarFn& phi, const GMap& g,
                                               const DomainSet& M, double eta,
                                               const SamplePlan& plan,
                                               const Tolerances& tol);

}  // namespace xconvex
