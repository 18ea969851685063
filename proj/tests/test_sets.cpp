// Epigraph and level-set checks, the lifted map, the quasi-iff-level-sets
// harness (agreement, skip, and the escape-asymmetry red event), and the
// concave mirrors.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>

#include "xconvex/catalog.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/sets.hpp"

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

TEST_CASE("lifting a map fixes the height coordinate") {
  GMap lifted = lifted_gmap(shift_g(3.0));
  CHECK(lifted.dim == 2);
  CHECK(lifted.eval(Point{1.0, 7.0}) == Point{4.0, 7.0});
  CHECK_FALSE(lifted.is_identity());
  CHECK(lifted_gmap(identity_g(1)).is_identity());
  CHECK(lifted_gmap(identity_g(2)).eval(Point{1.0, 2.0, 3.0}) ==
        Point{1.0, 2.0, 3.0});
}

TEST_CASE("epigraph membership") {
  ScalarFn sq = ScalarFn::parse("x1^2", 1);
  DomainSet M = seg(-2.0, 2.0);
  CHECK(epigraph_member(sq, M, Point{1.0}, 1.0, kTol));
  CHECK(epigraph_member(sq, M, Point{1.0}, 5.0, kTol));
  CHECK_FALSE(epigraph_member(sq, M, Point{1.0}, 0.5, kTol));
  CHECK_FALSE(epigraph_member(sq, M, Point{3.0}, 99.0, kTol));  // x outside M
  CHECK_THROWS_AS(epigraph_member(sq, M, Point{1.0, 2.0}, 0.0, kTol),
                  InputError);
}

TEST_CASE("epigraph check passes on a convex instance") {
  ScalarFn sq = ScalarFn::parse("x1^2", 1);
  DomainSet M = seg(-2.0, 3.0);
  GMap id = identity_g(1);
  SamplePlan plan = small_plan();

  ClassVerdict v = check_epigraph_x_convex(sq, id, M, plan, kTol);
  CHECK(v.class_name == "epigraph_x_convex");
  CHECK(v.status == VerdictStatus::NoCounterexampleFound);
  CHECK(v.combos_escaped == 0);
  // 21 samples at 3 distinct heights each, squared, times 11 deltas.
  CHECK(v.triples_checked == 63ull * 63ull * 11ull);
  REQUIRE(v.worst_gap.has_value());
  CHECK(*v.worst_gap <= kTol.eps_ineq);
}

TEST_CASE("epigraph check falsifies a nonconvex function by value") {
  ScalarFn fl = floor_alpha(0.5);
  DomainSet M = seg(-2.0, 0.0);
  GMap id = identity_g(1);
  SamplePlan plan = small_plan();
  plan.integer_lattice = true;

  ClassVerdict v = check_epigraph_x_convex(fl, id, M, plan, kTol);
  CHECK(v.status == VerdictStatus::Falsified);
  REQUIRE(v.witness.has_value());
  const Witness& w = *v.witness;
  CHECK(w.kind == WitnessKind::InequalityViolation);
  // Witness points live in the lifted space.
  CHECK(w.r.size() == 2);
  CHECK(w.t.size() == 2);
  CHECK(w.combo.size() == 2);
  CHECK(w.gap > kTol.eps_ineq);
  CHECK(w.lhs - w.rhs == w.gap);
}

TEST_CASE("epigraph check reports escapes as falsification") {
  DomainSet M = DomainSet::make(
      1, {{Interval::make(0.0, 1.0)}, {Interval::make(5.0, 6.0)}});
  GMap g = shift_g(10.0);
  ClassVerdict v =
      check_epigraph_x_convex(const_c(2.0, 1), g, M, small_plan(5, 5), kTol);
  CHECK(v.status == VerdictStatus::Falsified);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->kind == WitnessKind::DomainEscape);
  CHECK(v.witness->gap == v.witness->lhs);
  CHECK(v.witness->rhs == 0.0);
  bool noted = false;
  for (const std::string& n : v.notes)
    noted = noted || n.find("left the epigraph") != std::string::npos;
  CHECK(noted);

  // A constant function still exercises the vertical direction (H = 1).
  ClassVerdict flat = check_epigraph_x_convex(const_c(2.0, 1), identity_g(1),
                                              seg(0.0, 1.0), small_plan(5, 5),
                                              kTol);
  CHECK(flat.status == VerdictStatus::NoCounterexampleFound);
  CHECK(flat.triples_checked == 15ull * 15ull * 5ull);
}

TEST_CASE("lower level sets of the two-level spike") {
  // The upper piece is unbounded so the +1 shift cannot push a combination
  // out of the domain; the only violations are by value.
  ScalarFn phi = piecewise_3_2();
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, kInf)}});
  GMap g = shift_g(1.0);
  SamplePlan plan = small_plan();

  SUBCASE("the level below the spike fails at the spike point") {
    LevelSetVerdict lv = check_levelset_x_convex(phi, g, M, 2.0, plan, kTol);
    CHECK(lv.eta == 2.0);
    CHECK(lv.verdict.class_name == "levelset_x_convex");
    CHECK(lv.verdict.status == VerdictStatus::Falsified);
    REQUIRE(lv.verdict.witness.has_value());
    const Witness& w = *lv.verdict.witness;
    CHECK(w.r == Point{-1.0});
    CHECK(w.t == Point{-1.0});
    CHECK(w.delta == 0.0);
    CHECK(w.combo == Point{0.0});
    CHECK(w.lhs == 3.0);
    CHECK(w.rhs == 2.0);
    CHECK(w.gap == 1.0);
  }

  SUBCASE("the level above the spike passes with zero slack") {
    LevelSetVerdict lv = check_levelset_x_convex(phi, g, M, 3.0, plan, kTol);
    CHECK(lv.verdict.status == VerdictStatus::NoCounterexampleFound);
    REQUIRE(lv.verdict.worst_gap.has_value());
    CHECK(*lv.verdict.worst_gap == 0.0);
  }

  SUBCASE("an empty level set passes vacuously") {
    LevelSetVerdict lv = check_levelset_x_convex(phi, g, M, 1.0, plan, kTol);
    CHECK(lv.verdict.status == VerdictStatus::NoCounterexampleFound);
    CHECK(lv.verdict.triples_checked == 0);
    bool noted = false;
    for (const std::string& n : lv.verdict.notes)
      noted = noted || n == "level set is empty on this plan";
    CHECK(noted);
  }
}

TEST_CASE("level-set escapes falsify with a distance witness") {
  DomainSet M = DomainSet::make(
      1, {{Interval::make(0.0, 1.0)}, {Interval::make(5.0, 6.0)}});
  GMap g = shift_g(10.0);
  LevelSetVerdict lv = check_levelset_x_convex(const_c(2.0, 1), g, M, 99.0,
                                               small_plan(5, 5), kTol);
  CHECK(lv.verdict.status == VerdictStatus::Falsified);
  REQUIRE(lv.verdict.witness.has_value());
  CHECK(lv.verdict.witness->kind == WitnessKind::DomainEscape);
  bool noted = false;
  for (const std::string& n : lv.verdict.notes)
    noted = noted || n.find("left the level set") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("quasi and level sets agree on clean instances") {
  SUBCASE("floor family passes both directions") {
    ScalarFn phi = floor_alpha(0.5);
    DomainSet M = DomainSet::make(
        1, {{Interval::make(-kInf, -3.0)}, {Interval::make(-2.0, -1.0)}});
    GMap g = shift_g(-3.0);
    SamplePlan plan = small_plan();
    plan.integer_lattice = true;

    HarnessReport rep = quasi_iff_levelsets_harness(phi, g, M, plan, kTol);
    CHECK(rep.kind == "levelsets");
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.red_event);
    REQUIRE_FALSE(rep.verdicts.empty());
    CHECK(rep.verdicts[0].first == "quasi");
    CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
    CHECK(rep.metrics.at("levels") >= 1.0);
    CHECK(rep.verdicts.size() == 1 + static_cast<std::size_t>(rep.metrics.at("levels")));
  }

  SUBCASE("spiky instance falsifies quasi and the matching level") {
    ScalarFn phi = piecewise_3_2();
    DomainSet M = DomainSet::make(
        1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, kInf)}});
    GMap g = shift_g(1.0);
    HarnessReport rep = quasi_iff_levelsets_harness(phi, g, M, small_plan(), kTol);
    CHECK_FALSE(rep.red_event);
    CHECK(rep.verdicts[0].second.status == VerdictStatus::Falsified);
    bool matching_level_failed = false;
    for (const auto& [label, v] : rep.verdicts)
      if (label == "eta=2" && v.status == VerdictStatus::Falsified)
        matching_level_failed = true;
    CHECK(matching_level_failed);
  }

  SUBCASE("an explicit eta grid is honored") {
    HarnessReport rep = quasi_iff_levelsets_harness(
        const_c(2.0, 1), identity_g(1), seg(0.0, 1.0), small_plan(5, 5), kTol,
        {0.0, 5.0});
    CHECK_FALSE(rep.red_event);
    CHECK(rep.metrics.at("levels") == 2.0);
  }
}

TEST_CASE("level harness skips when everything escapes") {
  DomainSet M = DomainSet::make(
      1, {{Interval::make(0.0, 1.0)}, {Interval::make(5.0, 6.0)}});
  GMap g = shift_g(100.0);
  HarnessReport rep = quasi_iff_levelsets_harness(const_c(2.0, 1), g, M,
                                                  small_plan(5, 5), kTol);
  CHECK(rep.skipped);
  CHECK_FALSE(rep.red_event);
  REQUIRE_FALSE(rep.skip_reasons.empty());
  CHECK(rep.skip_reasons[0].find("escaped") != std::string::npos);
}

TEST_CASE("level harness red event from escape asymmetry") {
  // The quasi class check skips combinations that leave the domain, but a
  // level set is not closed under a combination that escapes. A constant
  // function on a domain with escaping pairs passes quasi while its level
  // fails, which is exactly the red event this harness exists to surface.
  DomainSet M = DomainSet::make(
      1, {{Interval::make(0.0, 2.0)}, {Interval::make(5.0, 6.0)}});
  GMap g = shift_g(5.0);
  HarnessReport rep = quasi_iff_levelsets_harness(const_c(2.0, 1), g, M,
                                                  small_plan(5, 5), kTol);
  CHECK(rep.red_event);
  CHECK(rep.verdicts[0].second.status == VerdictStatus::NoCounterexampleFound);
  REQUIRE(rep.red_notes.size() >= 2);
  CHECK(rep.red_notes[0].find("quasi passed but level") != std::string::npos);
  CHECK(rep.red_notes[1].find("domain escapes") != std::string::npos);
  REQUIRE_FALSE(rep.red_witnesses.empty());
  CHECK(rep.red_witnesses[0].kind == WitnessKind::DomainEscape);
}

TEST_CASE("oversized plans are rejected by the level harness") {
  // The quasi scan that precedes the guard still runs, so keep the delta
  // grid minimal to cross the sample-count limit quickly.
  SamplePlan plan;
  plan.grid_per_axis = 14501;
  plan.delta_grid = 2;
  plan.random_count = 0;
  CHECK_THROWS_AS(quasi_iff_levelsets_harness(identity_fn(), identity_g(1),
                                              seg(0.0, 1.0), plan, kTol),
                  InputError);
}

TEST_CASE("hypograph mirror") {
  DomainSet M = seg(-2.0, 3.0);
  GMap id = identity_g(1);
  SamplePlan plan = small_plan();

  ScalarFn cave = ScalarFn::parse("0 - x1^2", 1);
  ClassVerdict ok = check_hypograph_x_concave(cave, id, M, plan, kTol);
  CHECK(ok.class_name == "hypograph_x_concave");
  CHECK(ok.status == VerdictStatus::NoCounterexampleFound);
  bool noted = false;
  for (const std::string& n : ok.notes)
    noted = noted || n.find("negated") != std::string::npos;
  CHECK(noted);

  ScalarFn vex = ScalarFn::parse("x1^2", 1);
  ClassVerdict bad = check_hypograph_x_concave(vex, id, M, plan, kTol);
  CHECK(bad.status == VerdictStatus::Falsified);
}

TEST_CASE("upper level sets mirror through negation") {
  GMap id = identity_g(1);
  SamplePlan plan = small_plan();

  LevelSetVerdict ok = check_upper_levelset_x_concave(
      identity_fn(), id, seg(0.0, 10.0), 5.0, plan, kTol);
  CHECK(ok.eta == 5.0);
  CHECK(ok.verdict.class_name == "upper_levelset_x_concave");
  CHECK(ok.verdict.status == VerdictStatus::NoCounterexampleFound);

  // Downward spike: every point except 0 sits at -2, the spike at -3.
  ScalarFn dip = ScalarFn::parse("0 - piecewise((x1 == 0, 3), 2)", 1);
  DomainSet M = DomainSet::make(
      1, {{Interval::make(-1.0, -0.5)}, {Interval::make(0.0, kInf)}});
  LevelSetVerdict bad =
      check_upper_levelset_x_concave(dip, shift_g(1.0), M, -2.5, plan, kTol);
  CHECK(bad.eta == -2.5);
  CHECK(bad.verdict.status == VerdictStatus::Falsified);
  REQUIRE(bad.verdict.witness.has_value());
  // Witness values come from the negated check: lhs 3 against level 2.5.
  CHECK(bad.verdict.witness->lhs == 3.0);
  CHECK(bad.verdict.witness->rhs == 2.5);
  CHECK(bad.verdict.witness->gap == 0.5);
  bool noted = false;
  for (const std::string& n : bad.verdict.notes)
    noted = noted || n.find("mirrored") != std::string::npos;
  CHECK(noted);
}
