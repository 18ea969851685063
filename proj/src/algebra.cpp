#include "xconvex/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "xconvex/errors.hpp"
#include "kernel.hpp"

namespace xconvex {
namespace {

ExprPtr subst_var(const ExprPtr& e, const ExprPtr& replacement) {
  switch (e->kind) {
    case ExprKind::Number:
    case ExprKind::Param:
      return e;
    case ExprKind::Var:
      return replacement;
    case ExprKind::Neg:
      return make_unary(ExprKind::Neg, subst_var(e->kids[0], replacement));
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      return make_binary(e->kind, subst_var(e->kids[0], replacement),
                         subst_var(e->kids[1], replacement));
    case ExprKind::Pow:
      return make_pow(subst_var(e->kids[0], replacement), e->pow_exp);
    case ExprKind::Call: {
      std::vector<ExprPtr> args;
      args.reserve(e->kids.size());
      for (const ExprPtr& k : e->kids) args.push_back(subst_var(k, replacement));
      return make_call(e->call, std::move(args));
    }
    case ExprKind::Piecewise: {
      std::vector<PiecewiseArm> arms;
      arms.reserve(e->arms.size());
      for (const PiecewiseArm& a : e->arms)
        arms.push_back({subst_var(a.lhs, replacement), a.rel,
                        subst_var(a.rhs, replacement),
                        subst_var(a.value, replacement)});
      return make_piecewise(std::move(arms), subst_var(e->kids[0], replacement));
    }
  }
  throw InputError("unknown expression node");
}

ParamMap merge_params(const ParamMap& a, const ParamMap& b) {
  ParamMap out = a;
  for (const auto& [name, value] : b) {
    auto it = out.find(name);
    if (it == out.end())
      out.emplace(name, value);
    else if (it->second != value)
      throw InputError("parameter '" + name +
                       "' bound to two different values");
  }
  return out;
}

void require_same_dim(const ScalarFn& a, const ScalarFn& b) {
  if (a.dim != b.dim)
    throw InputError("operands have different dimensions");
}

}  // namespace

OuterFn OuterFn::make(ScalarFn theta, bool nondecreasing, bool convex) {
  if (theta.dim != 1) throw InputError("outer function must have dimension 1");
  OuterFn out;
  out.theta = std::move(theta);
  out.claim_nondecreasing = nondecreasing;
  out.claim_convex = convex;
  return out;
}

void OuterFn::verify_on(double lo, double hi, int k, const Tolerances& tol) {
  if (k < 3) throw InputError("outer verification needs at least 3 points");
  if (!(lo <= hi)) throw InputError("outer verification interval is empty");
  std::vector<double> ys(static_cast<std::size_t>(k));
  std::vector<double> vs(static_cast<std::size_t>(k));
  const double span = hi - lo;
  for (int l = 0; l < k; ++l) {
    double y = lo + span * (static_cast<double>(l) / (k - 1));
    ys[static_cast<std::size_t>(l)] = y;
    vs[static_cast<std::size_t>(l)] =
        theta(std::span<const double>(&ys[static_cast<std::size_t>(l)], 1));
  }
  verified_nondecreasing = true;
  for (int l = 0; l + 1 < k; ++l)
    if (vs[static_cast<std::size_t>(l) + 1] - vs[static_cast<std::size_t>(l)] <
        -tol.eps_ineq) {
      verified_nondecreasing = false;
      break;
    }
  // Uniform grid, so ys[l] is the exact midpoint of its neighbours and the
  // discrete midpoint inequality needs no extra evaluations.
  verified_convex = true;
  for (int l = 1; l + 1 < k; ++l) {
    double mid = 0.5 * (vs[static_cast<std::size_t>(l) - 1] +
                        vs[static_cast<std::size_t>(l) + 1]);
    if (vs[static_cast<std::size_t>(l)] > mid + tol.eps_ineq) {
      verified_convex = false;
      break;
    }
  }
}

ScalarFn compose(const OuterFn& theta, const ScalarFn& phi) {
  ExprPtr body = subst_var(theta.theta.body, phi.body);
  return ScalarFn::make(std::move(body), phi.dim,
                        merge_params(theta.theta.params, phi.params));
}

ScalarFn sum(const ScalarFn& a, const ScalarFn& b) {
  require_same_dim(a, b);
  return ScalarFn::make(make_binary(ExprKind::Add, a.body, b.body), a.dim,
                        merge_params(a.params, b.params));
}

ScalarFn scale(double alpha, const ScalarFn& phi) {
  if (!(alpha >= 0.0)) throw InputError("scale factor must be nonnegative");
  return ScalarFn::make(make_binary(ExprKind::Mul, make_number(alpha), phi.body),
                        phi.dim, phi.params);
}

ScalarFn conic(std::span<const double> coeffs, std::span<const ScalarFn> phis) {
  if (coeffs.size() != phis.size() || phis.empty())
    throw InputError("conic combination needs one coefficient per operand");
  for (double c : coeffs)
    if (!(c >= 0.0)) throw InputError("conic coefficients must be nonnegative");
  ParamMap params = phis[0].params;
  for (std::size_t i = 1; i < phis.size(); ++i) {
    require_same_dim(phis[0], phis[i]);
    params = merge_params(params, phis[i].params);
  }
  ExprPtr acc = make_binary(ExprKind::Mul, make_number(coeffs[0]), phis[0].body);
  for (std::size_t i = 1; i < phis.size(); ++i)
    acc = make_binary(
        ExprKind::Add, std::move(acc),
        make_binary(ExprKind::Mul, make_number(coeffs[i]), phis[i].body));
  return ScalarFn::make(std::move(acc), phis[0].dim, std::move(params));
}

namespace {

// Sampled range of phi over M, padded by 1% of the spread on both sides.
bool padded_range(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                  const SamplePlan& plan, const Tolerances& tol, double& lo,
                  double& hi) {
  detail::ScanContext cx =
      detail::make_context(M, g, &phi, plan, tol.eps_val_eq);
  if (cx.phi_vals.empty()) return false;
  auto [mn, mx] = std::minmax_element(cx.phi_vals.begin(), cx.phi_vals.end());
  double pad = 0.01 * (*mx - *mn);
  lo = *mn - pad;
  hi = *mx + pad;
  return true;
}

OuterFn verified_outer(const OuterFn& raw, const ScalarFn& phi, const GMap& g,
                       const DomainSet& M, const SamplePlan& plan,
                       const Tolerances& tol, HarnessReport& rep) {
  if (!raw.claim_nondecreasing || !raw.claim_convex)
    throw InputError("outer function must be declared nondecreasing and convex");
  double lo = 0.0, hi = 0.0;
  if (!padded_range(phi, g, M, plan, tol, lo, hi))
    throw InputError("no sampled points to take the inner range from");
  OuterFn checked = raw;
  checked.verify_on(lo, hi, 257, tol);
  if (!checked.verified_nondecreasing)
    throw InputError("outer function is not nondecreasing on the sampled range");
  if (!checked.verified_convex)
    throw InputError("outer function is not convex on the sampled range");
  rep.metrics["outer_range_lo"] = lo;
  rep.metrics["outer_range_hi"] = hi;
  return checked;
}

}  // namespace

HarnessReport theorem_closure_harness(const ClosureInputs& in, const GMap& g,
                                      const DomainSet& M, const SamplePlan& plan,
                                      const Tolerances& tol,
                                      const std::string& theorem_id) {
  HarnessReport rep;
  rep.id = theorem_id;
  rep.kind = "closure";

  ScalarFn derived;
  ConvexClass conclusion_class = ConvexClass::XConvex;
  CheckOptions opt;

  auto hypothesis = [&](const ScalarFn& phi, ConvexClass cls,
                        const std::string& label) {
    ClassVerdict v = check_class(phi, g, M, plan, tol, cls, opt);
    if (v.status != VerdictStatus::NoCounterexampleFound)
      rep.skip("hypothesis '" + label + "' did not pass (" +
               std::string(class_name(cls)) + ")");
    rep.verdicts.emplace_back(label, std::move(v));
  };

  if (theorem_id == "t42" || theorem_id == "t49") {
    if (!in.theta || in.phis.size() != 1)
      throw InputError(theorem_id + " needs one outer and one inner function");
    OuterFn theta = verified_outer(*in.theta, in.phis[0], g, M, plan, tol, rep);
    bool quasi = theorem_id == "t49";
    hypothesis(in.phis[0], quasi ? ConvexClass::QuasiXConvex : ConvexClass::XConvex,
               "inner");
    derived = compose(theta, in.phis[0]);
    conclusion_class = quasi ? ConvexClass::QuasiXConvex : ConvexClass::XConvex;
    if (quasi)
      rep.notes.push_back("conclusion asserted at quasi strength");
  } else if (theorem_id == "t43a") {
    if (in.phis.size() != 2) throw InputError("t43a needs two operands");
    hypothesis(in.phis[0], ConvexClass::XConvex, "left");
    hypothesis(in.phis[1], ConvexClass::XConvex, "right");
    derived = sum(in.phis[0], in.phis[1]);
  } else if (theorem_id == "t43b") {
    if (in.phis.size() != 1 || in.coeffs.size() != 1)
      throw InputError("t43b needs one operand and one coefficient");
    hypothesis(in.phis[0], ConvexClass::XConvex, "operand");
    derived = scale(in.coeffs[0], in.phis[0]);
    rep.metrics["alpha"] = in.coeffs[0];
  } else if (theorem_id == "t43c") {
    if (in.phis.empty() || in.coeffs.size() != in.phis.size())
      throw InputError("t43c needs matching operands and coefficients");
    for (std::size_t i = 0; i < in.phis.size(); ++i)
      hypothesis(in.phis[i], ConvexClass::XConvex,
                 "operand" + std::to_string(i + 1));
    derived = conic(in.coeffs, in.phis);
  } else {
    throw InputError("unknown closure property id '" + theorem_id + "'");
  }

  ClassVerdict conclusion =
      check_class(derived, g, M, plan, tol, conclusion_class, opt);
  if (!rep.skipped && conclusion.status == VerdictStatus::Falsified) {
    rep.red("derived function falsified " +
            std::string(class_name(conclusion_class)) +
            " although every hypothesis passed");
    if (conclusion.witness) rep.red_witnesses.push_back(*conclusion.witness);
  }
  if (conclusion.worst_gap)
    rep.metrics["conclusion_worst_gap"] = *conclusion.worst_gap;
  rep.verdicts.emplace_back("conclusion", std::move(conclusion));
  return rep;
}

}  // namespace xconvex
