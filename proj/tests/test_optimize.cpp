// Sampled optimization: global/local minima, the reachable-offset ball
// condition, the local-implies-global, minimum-set, and uniqueness harnesses
// with their skip and red paths, dominance cones, and the efficiency scans.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>

#include "xconvex/catalog.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/optimize.hpp"

using namespace xconvex;

namespace {
const Tolerances kTol{};
const double kInf = std::numeric_limits<double>::infinity();

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
}  // namespace

TEST_CASE("global minimum search returns the lex-first sampled argmin") {
  ScalarFn w = ScalarFn::parse("min((x1 + 1)^2, (x1 - 1)^2)", 1);
  MinResult r = global_min_search(w, seg(-2.0, 2.0), small_plan(41, 5));
  CHECK(r.point == Point{-1.0});  // ties at -1 and 1; first wins
  CHECK(r.value == 0.0);
  CHECK(r.index == 10);

  ScalarFn sq = ScalarFn::parse("x1^2", 1);
  MinResult s = global_min_search(sq, seg(-2.0, 3.0), small_plan());
  CHECK(s.point == Point{0.0});
  CHECK(s.value == 0.0);
  CHECK(s.index == 8);

  // A plan with no sampled points is an input error.
  SamplePlan tight = small_plan(3, 5);
  tight.truncation_bound = 10.0;
  CHECK_THROWS_AS(global_min_search(sq, seg(20.0, 30.0), tight), InputError);
}

TEST_CASE("local minima depend on the neighborhood radius") {
  // Asymmetric W: valleys at -1 (value 0) and +1 (value 0.5).
  ScalarFn w = ScalarFn::parse("min((x1 + 1)^2, (x1 - 1)^2 + 0.5)", 1);
  DomainSet M = seg(-2.0, 2.0);
  SamplePlan plan = small_plan(41, 5);

  std::vector<Point> tight = local_minima(w, M, plan, 0.3);
  REQUIRE(tight.size() == 2);
  CHECK(tight[0] == Point{-1.0});
  CHECK(tight[1] == Point{1.0});

  // A radius that covers both valleys keeps only the global one.
  std::vector<Point> wide = local_minima(w, M, plan, 3.0);
  REQUIRE(wide.size() == 1);
  CHECK(wide[0] == Point{-1.0});

  // Strict minima reject plateaus entirely.
  ScalarFn flat = const_c(2.0, 1);
  CHECK(local_minima(flat, seg(0.0, 1.0), small_plan(5, 5), 0.5, true).empty());
  CHECK(local_minima(flat, seg(0.0, 1.0), small_plan(5, 5), 0.5, false).size() == 5);
}

TEST_CASE("ball condition measures the largest reachable offset") {
  SamplePlan plan = small_plan(5, 5);

  BallCondition id = check_ball_condition(seg(0.0, 1.0), identity_g(1), plan, 2.0);
  CHECK(id.max_observed == 1.0);  // delta=1 swings across the whole segment
  CHECK(id.nu == 2.0);
  CHECK(id.holds_on_samples);
  CHECK_FALSE(check_ball_condition(seg(0.0, 1.0), identity_g(1), plan, 1.0)
                  .holds_on_samples);  // the comparison is strict

  GMap to_half = GMap::parse({"0.5"}, 1);
  BallCondition c = check_ball_condition(seg(0.0, 1.0), to_half, plan, 2.0);
  CHECK(c.max_observed == 1.5);  // from r=1: delta*(0-1) + 0.5 - 1

  // A single-point domain cannot move anywhere.
  BallCondition still =
      check_ball_condition(seg(2.0, 2.0), identity_g(1), plan, 0.1);
  CHECK(still.max_observed == 0.0);
  CHECK_FALSE(std::signbit(still.max_observed));
  CHECK(still.holds_on_samples);
}

TEST_CASE("local-global harness in the plain convex mode") {
  ScalarFn id = identity_fn();
  DomainSet M = seg(0.0, 10.0);
  GMap g = shift_g(-0.5);
  SamplePlan plan = small_plan();

  SUBCASE("passes and asserts a unique argmin") {
    HarnessReport rep =
        local_global_harness(id, g, M, plan, kTol, 11.0, LocalGlobalMode::XConvex);
    CHECK(rep.kind == "local_global");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("ball_max") == 10.5);  // r=10, s=0, delta=1, shift -0.5
    CHECK(rep.metrics.at("min_value") == 0.0);
    CHECK(rep.metrics.at("local_count") == 1.0);
    CHECK(rep.metrics.at("argmin_count") == 1.0);
    REQUIRE(rep.verdicts.size() == 2);
    CHECK(rep.verdicts[0].first == "hypothesis");
    CHECK(rep.verdicts[1].first == "strict_hypothesis");
    CHECK(rep.verdicts[1].second.status == VerdictStatus::NoCounterexampleFound);
  }

  SUBCASE("skips when the ball condition fails") {
    HarnessReport rep =
        local_global_harness(id, g, M, plan, kTol, 5.0, LocalGlobalMode::XConvex);
    CHECK(rep.skipped);
    CHECK_FALSE(rep.red_event);
    REQUIRE_FALSE(rep.skip_reasons.empty());
    CHECK(rep.skip_reasons[0].find("ball condition fails") != std::string::npos);
    CHECK(rep.metrics.count("min_value") == 0);  // stopped before sampling
  }

  SUBCASE("skips when the hypothesis class falsifies") {
    ScalarFn fl = floor_alpha(0.5);
    DomainSet Mf = seg(-4.0, -1.0);
    SamplePlan pf = small_plan();
    HarnessReport rep = local_global_harness(fl, identity_g(1), Mf, pf, kTol,
                                             4.0, LocalGlobalMode::XConvex);
    CHECK(rep.skipped);
    CHECK_FALSE(rep.red_event);
    bool reason = false;
    for (const std::string& s : rep.skip_reasons)
      reason = reason || s.find("hypothesis class x_convex") != std::string::npos;
    CHECK(reason);
  }
}

TEST_CASE("local-global harness quasi and semistrict modes") {
  SUBCASE("quasi mode counts only strict local minima") {
    // Floor plateaus have no strict local minima at all.
    ScalarFn fl = floor_alpha(0.5);
    DomainSet M = seg(-4.0, -1.0);
    SamplePlan plan = small_plan(31, 11);
    HarnessReport rep = local_global_harness(fl, identity_g(1), M, plan, kTol,
                                             4.0, LocalGlobalMode::QuasiStrict);
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.verdicts[0].second.class_name == "quasi_x_convex");
    CHECK(rep.metrics.at("local_count") == 0.0);
    CHECK(rep.metrics.count("argmin_count") == 0);  // only the convex mode
  }

  SUBCASE("semistrict mode tolerates a tied plateau of minimizers") {
    ScalarFn phi = piecewise_3_2();
    DomainSet M = DomainSet::make(
        1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, kInf)}});
    GMap g = shift_g(1.0);
    SamplePlan plan = small_plan();
    HarnessReport rep = local_global_harness(phi, g, M, plan, kTol, 3000.0,
                                             LocalGlobalMode::Semistrict);
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.verdicts[0].second.class_name == "semistrictly_quasi_x_convex");
    CHECK(rep.metrics.at("min_value") == 2.0);
    CHECK(rep.metrics.at("local_count") >= 2.0);  // the whole value-2 plateau
  }
}

TEST_CASE("minimum-set harness validates its hypothesis argument") {
  CHECK_THROWS_AS(
      minimum_set_x_convex_harness(identity_fn(), identity_g(1), seg(0.0, 1.0),
                                   small_plan(5, 5), kTol,
                                   ConvexClass::StrictlyXConvex),
      InputError);
}

TEST_CASE("minimum-set harness red event when the argmin combination escapes") {
  // The unique sampled minimizer of the identity on [0, 10] is 0; its
  // combination under g(t) = t - 1 lands at -1, outside the domain.
  ScalarFn id = identity_fn();
  DomainSet M = seg(0.0, 10.0);
  GMap g = shift_g(-1.0);
  SamplePlan plan = small_plan();

  HarnessReport rep = minimum_set_x_convex_harness(id, g, M, plan, kTol,
                                                   ConvexClass::XConvex);
  CHECK(rep.kind == "minimum_set");
  CHECK_FALSE(rep.skipped);
  CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
  CHECK(rep.red_event);
  REQUIRE_FALSE(rep.red_notes.empty());
  CHECK(rep.red_notes[0].find("left the domain") != std::string::npos);
  CHECK(rep.metrics.at("min_value") == 0.0);
  CHECK(rep.metrics.at("argmin_count") == 1.0);
  CHECK(rep.metrics.at("escapes") == 11.0);  // every delta escapes
  REQUIRE(rep.red_witnesses.size() == 1);
  const Witness& w = rep.red_witnesses[0];
  CHECK(w.kind == WitnessKind::DomainEscape);
  CHECK(w.r == Point{0.0});
  CHECK(w.t == Point{0.0});
  CHECK(w.delta == 0.0);
  CHECK(w.combo == Point{-1.0});
  CHECK(w.lhs == 1.0);  // distance from -1 to the domain
  CHECK(w.rhs == 0.0);
  CHECK(w.gap == 1.0);
}

TEST_CASE("minimum-set harness passes on the floor ray") {
  ScalarFn fl = floor_alpha(0.5);
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-kInf, -3.0)}, {Interval::make(-2.0, -1.0)}});
  GMap g = shift_g(-3.0);
  SamplePlan plan = small_plan();
  plan.truncation_bound = 10.0;
  plan.integer_lattice = true;

  HarnessReport rep = minimum_set_x_convex_harness(fl, g, M, plan, kTol,
                                                   ConvexClass::QuasiXConvex);
  CHECK_FALSE(rep.skipped);
  CHECK_FALSE(rep.red_event);
  CHECK(rep.metrics.at("min_value") == -9.5);  // 0.5 + floor(-10)
  CHECK(rep.metrics.at("argmin_count") == 3.0);  // the whole floor plateau
  CHECK(rep.metrics.at("escapes") == 0.0);
}

TEST_CASE("minimum-set harness skips on a failed hypothesis") {
  ScalarFn phi = piecewise_3_2();
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, kInf)}});
  HarnessReport rep = minimum_set_x_convex_harness(
      phi, shift_g(1.0), M, small_plan(), kTol, ConvexClass::XConvex);
  CHECK(rep.skipped);
  CHECK_FALSE(rep.red_event);
  CHECK(rep.metrics.count("argmin_count") == 1);  // still reported
}

TEST_CASE("minimum-set harness red event by value above the minimum") {
  // Values 0 and 8e-10 both land inside the eps_ineq argmin band, but their
  // combinations take the default value 1.6e-9, which exceeds min + eps.
  // The quasi hypothesis still passes because each pairwise max absorbs all
  // but 8e-10 of that; the minimum set is where the asymmetry shows.
  ScalarFn phi = ScalarFn::parse("piecewise((x1 == 0, 0), (x1 == 1, b), m)", 1,
                                 {{"b", 8e-10}, {"m", 1.6e-9}});
  DomainSet M = seg(0.0, 1.0);
  SamplePlan plan = small_plan(5, 5);

  HarnessReport rep = minimum_set_x_convex_harness(
      phi, identity_g(1), M, plan, kTol, ConvexClass::QuasiXConvex);
  CHECK_FALSE(rep.skipped);
  CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
  CHECK(rep.metrics.at("argmin_count") == 2.0);
  CHECK(rep.red_event);
  REQUIRE(rep.red_notes.size() == 1);
  CHECK(rep.red_notes[0].find("value above the sampled minimum") !=
        std::string::npos);
  REQUIRE(rep.red_witnesses.size() == 1);
  const Witness& w = rep.red_witnesses[0];
  CHECK(w.kind == WitnessKind::InequalityViolation);
  CHECK(w.r == Point{0.0});
  CHECK(w.t == Point{1.0});
  CHECK(w.delta == 0.25);
  CHECK(w.combo == Point{0.75});
  CHECK(w.lhs == 1.6e-9);
  CHECK(w.rhs == 0.0);
  CHECK(w.gap == 1.6e-9);
}

TEST_CASE("uniqueness harness") {
  SUBCASE("passes on a strictly quasi instance with one argmin") {
    ScalarFn sq = ScalarFn::parse("x1^2", 1);
    HarnessReport rep = uniqueness_harness(sq, identity_g(1), seg(-2.0, 3.0),
                                           small_plan(), kTol);
    CHECK(rep.kind == "uniqueness");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("argmin_count") == 1.0);
    CHECK(rep.metrics.at("min_value") == 0.0);
  }

  SUBCASE("skips when the strict hypothesis falsifies") {
    ScalarFn w = ScalarFn::parse("min((x1 + 1)^2, (x1 - 1)^2)", 1);
    HarnessReport rep = uniqueness_harness(w, identity_g(1), seg(-2.0, 2.0),
                                           small_plan(41, 11), kTol);
    CHECK(rep.skipped);
    CHECK_FALSE(rep.red_event);
  }

  SUBCASE("red event when the grid straddles an unseen minimizer") {
    // |x| on two pieces that exclude the true minimizer: every cross-pair
    // combination near the gap escapes (and is skipped by the class check),
    // so the strict hypothesis passes while the sampled argmin set is the
    // exact tie {-0.25, +0.25}.
    ScalarFn av = ScalarFn::parse("abs(x1)", 1);
    DomainSet M = DomainSet::make(
        1, {{Interval::make(-1.0, -0.25)}, {Interval::make(0.25, 1.0)}});
    HarnessReport rep =
        uniqueness_harness(av, identity_g(1), M, small_plan(5, 5), kTol);
    CHECK_FALSE(rep.skipped);
    CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
    CHECK(rep.red_event);
    CHECK(rep.metrics.at("argmin_count") == 2.0);
    REQUIRE_FALSE(rep.red_notes.empty());
    CHECK(rep.red_notes[0].find("found 2") != std::string::npos);
  }
}

TEST_CASE("componentwise dominance cones") {
  std::vector<double> a = {1.0, 2.0};
  std::vector<double> b = {1.0, 3.0};
  CHECK(dominates(a, b, OrderCone::AMinusZero));
  CHECK_FALSE(dominates(a, b, OrderCone::APrime));  // needs all-strict
  CHECK_FALSE(dominates(b, a, OrderCone::AMinusZero));
  CHECK_FALSE(dominates(a, a, OrderCone::AMinusZero));  // no strict coordinate
  CHECK_FALSE(dominates(a, a, OrderCone::APrime));

  std::vector<double> c = {0.0, 5.0};
  CHECK_FALSE(dominates(c, b, OrderCone::AMinusZero));  // incomparable
  CHECK_FALSE(dominates(b, c, OrderCone::AMinusZero));

  std::vector<double> lo = {1.0}, hi = {2.0};
  CHECK(dominates(lo, hi, OrderCone::APrime));

  std::vector<double> short_v = {1.0};
  CHECK_THROWS_AS(dominates(short_v, a, OrderCone::AMinusZero), InputError);
}

TEST_CASE("efficiency scan separates local from global flags") {
  // Exact 4-point grid {-1, 0, 1, 2}: the middle two trade off, the outer
  // two are dominated only by points farther than nu away.
  ObjectiveVector Phi;
  Phi.components = {ScalarFn::parse("x1^2", 1),
                    ScalarFn::parse("(x1 - 1)^2", 1)};
  Phi.g = identity_g(1);
  DomainSet M = seg(-1.0, 2.0);
  std::vector<EfficiencyVerdict> scan =
      efficiency_scan(Phi, M, small_plan(4, 5), 0.5);
  REQUIRE(scan.size() == 4);

  CHECK(scan[0].r == Point{-1.0});
  CHECK_FALSE(scan[0].global_efficient);
  CHECK(scan[0].local_efficient);  // nearest dominator is 1.0 away
  CHECK_FALSE(scan[0].global_weakly);
  CHECK(scan[0].local_weakly);
  REQUIRE(scan[0].dominator.has_value());
  CHECK(*scan[0].dominator == Point{0.0});  // first dominator in sample order

  CHECK(scan[1].global_efficient);
  CHECK(scan[1].local_efficient);
  CHECK(scan[1].global_weakly);
  CHECK(scan[1].local_weakly);
  CHECK_FALSE(scan[1].dominator.has_value());
  CHECK(scan[2].global_efficient);

  CHECK(scan[3].r == Point{2.0});
  CHECK_FALSE(scan[3].global_efficient);
  CHECK(scan[3].local_efficient);
  REQUIRE(scan[3].dominator.has_value());
  CHECK(*scan[3].dominator == Point{0.0});

  ObjectiveVector empty;
  empty.g = identity_g(1);
  CHECK_THROWS_AS(efficiency_scan(empty, M, small_plan(4, 5), 0.5), InputError);
  ObjectiveVector wrongg;
  wrongg.components = Phi.components;
  wrongg.g = identity_g(2);
  CHECK_THROWS_AS(efficiency_scan(wrongg, M, small_plan(4, 5), 0.5), InputError);
}

TEST_CASE("efficiency scan matches the trade-off segment exactly") {
  ObjectiveVector Phi;
  Phi.components = {ScalarFn::parse("x1^2", 1),
                    ScalarFn::parse("(x1 - 1)^2", 1)};
  Phi.g = identity_g(1);
  DomainSet M = seg(-1.0, 2.0);
  std::vector<EfficiencyVerdict> scan =
      efficiency_scan(Phi, M, small_plan(31, 5), 0.2);
  REQUIRE(scan.size() == 31);
  std::size_t efficient = 0;
  for (const EfficiencyVerdict& e : scan) {
    bool inside = e.r[0] >= 0.0 && e.r[0] <= 1.0;
    CHECK(e.global_efficient == inside);
    CHECK(e.local_efficient == e.global_efficient);
    CHECK(e.global_weakly == e.global_efficient);
    CHECK(e.dominator.has_value() == !e.global_efficient);
    if (e.global_efficient) {
      CHECK(e.local_weakly);
      ++efficient;
    }
  }
  CHECK(efficient == 11);
}

TEST_CASE("efficiency property harness") {
  ObjectiveVector Phi;
  Phi.components = {ScalarFn::parse("x1^2", 1),
                    ScalarFn::parse("(x1 - 1)^2", 1)};
  Phi.g = identity_g(1);
  DomainSet M = seg(-1.0, 2.0);
  SamplePlan plan = small_plan(31, 11);

  SUBCASE("local efficiency implies efficiency under both hypotheses") {
    HarnessReport rep =
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t53");
    CHECK(rep.kind == "efficiency");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    REQUIRE(rep.verdicts.size() == 4);  // quasi + semistrict per component
    CHECK(rep.metrics.at("sample_count") == 31.0);
    CHECK(rep.metrics.at("efficient_count") == 11.0);
  }

  SUBCASE("weighted scalarization certifies its sampled minimum") {
    std::vector<double> mu = {0.5, 0.5};
    HarnessReport rep =
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t54", mu);
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("scalar_local_count") == 1.0);
    CHECK(rep.metrics.at("efficient_count") == 11.0);
  }

  SUBCASE("one strict component suffices without weights") {
    HarnessReport rep =
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t55");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
  }

  SUBCASE("weak efficiency from semistrict components") {
    HarnessReport rep =
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t56");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
  }

  SUBCASE("weakly efficient scalarization with a zero weight") {
    std::vector<double> mu = {1.0, 0.0};
    HarnessReport rep =
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t57", mu);
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("scalar_local_count") == 1.0);
  }

  SUBCASE("weight validation") {
    std::vector<double> wrong_size = {1.0};
    CHECK_THROWS_AS(
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t54", wrong_size),
        InputError);
    std::vector<double> negative = {-1.0, 2.0};
    CHECK_THROWS_AS(
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t54", negative),
        InputError);
    std::vector<double> zeros = {0.0, 0.0};
    CHECK_THROWS_AS(
        efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t54", zeros),
        InputError);
    CHECK_THROWS_AS(efficiency_theorem_harness(Phi, M, plan, kTol, 0.2, "t99"),
                    InputError);
  }

  SUBCASE("skips when the positively weighted component is not strict") {
    ObjectiveVector mixed;
    mixed.components = {ScalarFn::parse("x1^2", 1), const_c(2.0, 1)};
    mixed.g = identity_g(1);
    std::vector<double> mu = {0.0, 1.0};
    HarnessReport rep =
        efficiency_theorem_harness(mixed, M, plan, kTol, 0.2, "t54", mu);
    CHECK(rep.skipped);
    CHECK_FALSE(rep.red_event);
    bool reason = false;
    for (const std::string& s : rep.skip_reasons)
      reason = reason || s.find("positively weighted") != std::string::npos;
    CHECK(reason);
  }

  SUBCASE("skips when a component is not quasi") {
    ObjectiveVector withw;
    withw.components = {ScalarFn::parse("min((x1 + 1)^2, (x1 - 1)^2)", 1),
                        ScalarFn::parse("(x1 - 1)^2", 1)};
    withw.g = identity_g(1);
    HarnessReport rep =
        efficiency_theorem_harness(withw, M, plan, kTol, 0.2, "t53");
    CHECK(rep.skipped);
    bool reason = false;
    for (const std::string& s : rep.skip_reasons)
      reason = reason || s.find("component 1 is not quasi") != std::string::npos;
    CHECK(reason);
  }
}
