// Outer-function verification, derived-function builders (compose, sum,
// scale, conic), and the closure-property harness including its skip and
// red-event paths.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "xconvex/algebra.hpp"
#include "xconvex/catalog.hpp"
#include "xconvex/errors.hpp"

using namespace xconvex;

namespace {
const Tolerances kTol{};

DomainSet seg(double lo, double hi) {
  return DomainSet::make(1, {{Interval::make(lo, hi)}});
}

SamplePlan small_plan(int grid = 21, int deltas = 11) {
  SamplePlan plan;
  plan.grid_per_axis = grid;
  plan.delta_grid = deltas;
  plan.random_count = 0;
  return plan;
}

OuterFn outer(const std::string& text, ParamMap params = {}) {
  return OuterFn::make(ScalarFn::parse(text, 1, std::move(params)), true, true);
}
}  // namespace

TEST_CASE("outer function construction and sampled verification") {
  CHECK_THROWS_AS(OuterFn::make(const_c(0.0, 2), true, true), InputError);

  OuterFn sq = OuterFn::make(ScalarFn::parse("x1^2", 1), true, true);
  CHECK(sq.claim_nondecreasing);
  CHECK(sq.claim_convex);
  CHECK_FALSE(sq.verified_nondecreasing);

  CHECK_THROWS_AS(sq.verify_on(0.0, 2.0, 2, kTol), InputError);  // k >= 3
  CHECK_THROWS_AS(sq.verify_on(2.0, 0.0, 5, kTol), InputError);  // empty range

  sq.verify_on(0.0, 2.0, 5, kTol);
  CHECK(sq.verified_nondecreasing);
  CHECK(sq.verified_convex);

  // x^2 decreases left of zero; the midpoint inequality still holds.
  sq.verify_on(-2.0, 2.0, 5, kTol);
  CHECK_FALSE(sq.verified_nondecreasing);
  CHECK(sq.verified_convex);

  OuterFn fl = OuterFn::make(ScalarFn::parse("floor(x1)", 1), true, true);
  fl.verify_on(0.0, 2.0, 5, kTol);
  CHECK(fl.verified_nondecreasing);
  CHECK_FALSE(fl.verified_convex);  // jumps break the midpoint inequality

  OuterFn rt = OuterFn::make(ScalarFn::parse("sqrt(x1)", 1), true, true);
  rt.verify_on(0.0, 4.0, 5, kTol);
  CHECK(rt.verified_nondecreasing);
  CHECK_FALSE(rt.verified_convex);  // concave

  OuterFn lin = OuterFn::make(ScalarFn::parse("2 * x1 + 1", 1), true, true);
  lin.verify_on(-5.0, 5.0, 17, kTol);
  CHECK(lin.verified_nondecreasing);
  CHECK(lin.verified_convex);
}

TEST_CASE("compose substitutes the inner body for the outer variable") {
  OuterFn sq = outer("x1^2");
  ScalarFn inner = ScalarFn::parse("x1 + 1", 1);
  ScalarFn both = compose(sq, inner);
  CHECK(both.text() == "(x1 + 1)^2");
  CHECK(both(Point{2.0}) == 9.0);
  CHECK(both.dim == 1);

  // Substitution reaches into piecewise guards and values.
  OuterFn relu = outer("piecewise((x1 <= 0, 0), x1)");
  ScalarFn shift = ScalarFn::parse("x1 - 1", 1);
  ScalarFn hinge = compose(relu, shift);
  CHECK(hinge(Point{0.5}) == 0.0);
  CHECK(hinge(Point{3.0}) == 2.0);

  // Shared parameter names must agree in value.
  OuterFn pa = outer("a * x1", {{"a", 2.0}});
  ScalarFn same = ScalarFn::parse("x1 + a", 1, {{"a", 2.0}});
  CHECK(compose(pa, same)(Point{1.0}) == 6.0);
  ScalarFn clash = ScalarFn::parse("x1 + a", 1, {{"a", 3.0}});
  CHECK_THROWS_AS(compose(pa, clash), InputError);
}

TEST_CASE("sum, scale, and conic builders") {
  ScalarFn id = identity_fn();
  ScalarFn two = const_c(2.0, 1);

  ScalarFn s = sum(id, two);
  CHECK(s(Point{0.1}) == 2.1);
  CHECK(s.text() == "x1 + 2");
  CHECK_THROWS_AS(sum(id, const_c(0.0, 2)), InputError);  // dim mismatch

  ScalarFn d = scale(2.0, id);
  CHECK(d(Point{0.3}) == 0.6);
  CHECK(scale(0.0, id)(Point{5.0}) == 0.0);
  CHECK_THROWS_AS(scale(-1.0, id), InputError);
  CHECK_THROWS_AS(scale(std::nan(""), id), InputError);

  std::vector<ScalarFn> fns = {id, two};
  std::vector<double> cs = {2.0, 3.0};
  ScalarFn combo = conic(cs, fns);
  CHECK(combo(Point{1.0}) == 8.0);  // 2*1 + 3*2
  CHECK(combo.text() == "2*x1 + 3*2");

  std::vector<double> bad = {2.0};
  CHECK_THROWS_AS(conic(bad, fns), InputError);  // arity mismatch
  std::vector<double> neg = {2.0, -1.0};
  CHECK_THROWS_AS(conic(neg, fns), InputError);
  std::vector<ScalarFn> none;
  std::vector<double> empty;
  CHECK_THROWS_AS(conic(empty, none), InputError);
}

TEST_CASE("identity-like rewrites leave class verdicts unchanged") {
  // scale(1, phi) and phi + 0 evaluate bitwise identically on these values,
  // so every class check must return the same verdict and gap.
  ScalarFn phi = piecewise_3_2();
  GMap g = shift_g(1.0);
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, 4.0)}});
  SamplePlan plan = small_plan();

  ClassifyResult base = classify(phi, g, M, plan, kTol);
  ClassifyResult scaled = classify(scale(1.0, phi), g, M, plan, kTol);
  ClassifyResult summed = classify(sum(phi, const_c(0.0, 1)), g, M, plan, kTol);

  for (int i = 0; i < kClassCount; ++i) {
    const ClassVerdict& a = base.classes[static_cast<std::size_t>(i)];
    const ClassVerdict& b = scaled.classes[static_cast<std::size_t>(i)];
    const ClassVerdict& c = summed.classes[static_cast<std::size_t>(i)];
    CHECK(a.status == b.status);
    CHECK(a.status == c.status);
    REQUIRE(a.worst_gap.has_value() == b.worst_gap.has_value());
    REQUIRE(a.worst_gap.has_value() == c.worst_gap.has_value());
    if (a.worst_gap) {
      CHECK(*a.worst_gap == *b.worst_gap);
      CHECK(*a.worst_gap == *c.worst_gap);
    }
  }
}

TEST_CASE("closure harness happy paths stay green") {
  DomainSet M = seg(0.0, 10.0);
  GMap g = shift_g(-0.5);
  SamplePlan plan = small_plan();
  ScalarFn id = identity_fn();

  SUBCASE("outer composition with a plain convex hypothesis") {
    ClosureInputs in;
    in.theta = outer("2 * x1 + 1");
    in.phis = {id};
    HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t42");
    CHECK(rep.id == "t42");
    CHECK(rep.kind == "closure");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    REQUIRE(rep.verdicts.size() == 2);
    CHECK(rep.verdicts[0].first == "inner");
    CHECK(rep.verdicts[1].first == "conclusion");
    CHECK(rep.metrics.count("outer_range_lo") == 1);
    CHECK(rep.metrics.count("outer_range_hi") == 1);
    CHECK(rep.metrics.at("conclusion_worst_gap") < 0.0);
  }

  SUBCASE("outer composition at quasi strength") {
    DomainSet Mf = DomainSet::make(
        1, {{Interval::make(-10.0, -3.0)}, {Interval::make(-2.0, -1.0)}});
    GMap gf = shift_g(-3.0);
    SamplePlan pf = small_plan();
    pf.integer_lattice = true;
    ClosureInputs in;
    in.theta = outer("2 * x1 + 1");
    in.phis = {floor_alpha(0.5)};
    HarnessReport rep = theorem_closure_harness(in, gf, Mf, pf, kTol, "t49");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    bool noted = false;
    for (const std::string& n : rep.notes)
      noted = noted || n == "conclusion asserted at quasi strength";
    CHECK(noted);
  }

  SUBCASE("sum of two passing operands") {
    ClosureInputs in;
    in.phis = {id, const_c(2.0, 1)};
    HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t43a");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    REQUIRE(rep.verdicts.size() == 3);
    CHECK(rep.verdicts[0].first == "left");
    CHECK(rep.verdicts[1].first == "right");
  }

  SUBCASE("nonnegative scaling") {
    ClosureInputs in;
    in.phis = {id};
    in.coeffs = {2.0};
    HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t43b");
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("alpha") == 2.0);
  }

  SUBCASE("conic combination") {
    ClosureInputs in;
    in.phis = {id, const_c(2.0, 1)};
    in.coeffs = {2.0, 3.0};
    HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t43c");
    CHECK_FALSE(rep.red_event);
    REQUIRE(rep.verdicts.size() == 3);
    CHECK(rep.verdicts[0].first == "operand1");
    CHECK(rep.verdicts[1].first == "operand2");
  }
}

TEST_CASE("closure harness skips when a hypothesis falsifies") {
  // The floor family is not plain X-convex here, so t42 must skip, not red.
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-4.0, -0.02)}, {Interval::make(-0.01, 0.0)}});
  GMap g = shift_g(-0.02);
  SamplePlan plan = small_plan(41, 11);
  plan.integer_lattice = true;

  ClosureInputs in;
  in.theta = outer("2 * x1 + 1");
  in.phis = {floor_alpha(0.5)};
  HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t42");
  CHECK(rep.skipped);
  CHECK_FALSE(rep.red_event);
  REQUIRE_FALSE(rep.skip_reasons.empty());
  CHECK(rep.skip_reasons[0].find("inner") != std::string::npos);
}

TEST_CASE("closure harness red event on tolerance amplification") {
  // A spike of 5e-10 sits below eps_ineq, so the hypothesis passes; scaling
  // by 1e6 pushes the same spike far past eps_ineq and the conclusion
  // falsifies with every hypothesis clean: the genuine red-event path.
  DomainSet M = seg(0.0, 1.0);
  GMap g = identity_g(1);
  SamplePlan plan = small_plan(5, 5);
  ScalarFn spiky = ScalarFn::parse("x1 + piecewise((x1 == 0.5, b), 0)", 1,
                                   {{"b", 5e-10}});

  ClosureInputs in;
  in.theta = outer("1000000 * x1");
  in.phis = {spiky};
  HarnessReport rep = theorem_closure_harness(in, g, M, plan, kTol, "t42");
  CHECK_FALSE(rep.skipped);
  CHECK(rep.red_event);
  REQUIRE_FALSE(rep.red_notes.empty());
  CHECK(rep.red_notes[0].find("derived function falsified") != std::string::npos);
  REQUIRE(rep.red_witnesses.size() == 1);
  CHECK(rep.red_witnesses[0].combo == Point{0.5});
  // Hypothesis verdict recorded as passing despite the sub-eps spike.
  CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
  CHECK(rep.verdicts[1].second.status == VerdictStatus::Falsified);
}

TEST_CASE("closure harness input validation") {
  DomainSet M = seg(0.0, 1.0);
  GMap g = identity_g(1);
  SamplePlan plan = small_plan(5, 5);
  ScalarFn id = identity_fn();

  ClosureInputs no_theta;
  no_theta.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(no_theta, g, M, plan, kTol, "t42"),
                  InputError);

  ClosureInputs one;
  one.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(one, g, M, plan, kTol, "t43a"),
                  InputError);

  ClosureInputs nocoef;
  nocoef.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(nocoef, g, M, plan, kTol, "t43b"),
                  InputError);

  ClosureInputs badcoef;
  badcoef.phis = {id};
  badcoef.coeffs = {-1.0};
  CHECK_THROWS_AS(theorem_closure_harness(badcoef, g, M, plan, kTol, "t43b"),
                  InputError);

  ClosureInputs unknown;
  unknown.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(unknown, g, M, plan, kTol, "t99"),
                  InputError);

  // Claims must be declared and must survive sampled verification.
  ClosureInputs unclaimed;
  unclaimed.theta = OuterFn::make(ScalarFn::parse("x1", 1), true, false);
  unclaimed.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(unclaimed, g, M, plan, kTol, "t42"),
                  InputError);

  ClosureInputs notconvex;
  notconvex.theta = outer("floor(x1)");
  notconvex.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(notconvex, g, M, plan, kTol, "t42"),
                  InputError);

  ClosureInputs notmono;
  notmono.theta = outer("0 - x1");
  notmono.phis = {id};
  CHECK_THROWS_AS(theorem_closure_harness(notmono, g, M, plan, kTol, "t42"),
                  InputError);
}
