#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xconvex/checker.hpp"
#include "xconvex/fn.hpp"
#include "xconvex/harness.hpp"

namespace xconvex {

// Scalar outer function theta : R -> R with structural claims. The claims are
// not trusted: verify_on samples [lo, hi] and checks nondecreasing consecutive
// values and the midpoint inequality within eps_ineq, recording the result in
// the verified_* fields.
struct OuterFn {
  ScalarFn theta;
  bool claim_nondecreasing = false;
  bool claim_convex = false;
  bool verified_nondecreasing = false;
  bool verified_convex = false;

  static OuterFn make(ScalarFn theta, bool nondecreasing, bool convex);
  // k evenly spaced points on [lo, hi]; k >= 3 enforced.
  void verify_on(double lo, double hi, int k, const Tolerances& tol);
};

// Builders for derived functions. Each returns a ScalarFn whose tree evaluates
// with exactly the rounding sequence implied by the printed formula, so a
// derived function checked directly and a harness-built one agree bit-for-bit.
ScalarFn compose(const OuterFn& theta, const ScalarFn& phi);
ScalarFn sum(const ScalarFn& a, const ScalarFn& b);
ScalarFn scale(double alpha, const ScalarFn& phi);  // alpha >= 0 enforced
ScalarFn conic(std::span<const double> coeffs, std::span<const ScalarFn> phis);

// Inputs for one closure harness run. theta is used by t42/t49, coeffs by
// t43b (one entry) and t43c (one per operand).
struct ClosureInputs {
  std::optional<OuterFn> theta;
  std::vector<ScalarFn> phis;
  std::vector<double> coeffs;
};

// Runs one preservation property end to end:
//   t42  nondecreasing convex theta, X-convex phi   -> theta(phi) X-convex
//   t43a X-convex phi1, phi2                        -> phi1 + phi2 X-convex
//   t43b X-convex phi, alpha >= 0                   -> alpha * phi X-convex
//   t43c X-convex phis, coeffs >= 0                 -> sum_i c_i phi_i X-convex
//   t49  nondecreasing convex theta, quasi phi      -> theta(phi) quasi
// Structural preconditions (theta claims verified on the sampled range of phi
// padded by 1%, nonnegative coefficients, matching dims) raise InputError.
// Hypothesis class checks that come back Falsified mark the report skipped;
// a Falsified conclusion under clean hypotheses is the red event.
HarnessReport theorem_closure_harness(const ClosureInputs& in, const GMap& g,
                                      const DomainSet& M, const SamplePlan& plan,
                                      const Tolerances& tol,
                                      const std::string& theorem_id);

}  // namespace xconvex
