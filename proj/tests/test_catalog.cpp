// Named building-block functions and maps: frozen evaluations, parameter
// baking, and canonical rendering.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "xconvex/catalog.hpp"
#include "xconvex/errors.hpp"

using namespace xconvex;

TEST_CASE("constant function ignores the point") {
  ScalarFn two = const_c(2.0, 1);
  CHECK(two(Point{-7.0}) == 2.0);
  CHECK(two(Point{0.0}) == 2.0);
  CHECK(two.dim == 1);

  ScalarFn zero2 = const_c(0.0, 2);
  CHECK(zero2(Point{3.0, 4.0}) == 0.0);
  CHECK(zero2.dim == 2);
  CHECK(zero2.text() == "0");
}

TEST_CASE("identity function returns its argument bitwise") {
  ScalarFn id = identity_fn();
  CHECK(id(Point{0.25}) == 0.25);
  CHECK(id(Point{-1e300}) == -1e300);
  CHECK(id.text() == "x1");
}

TEST_CASE("floor family adds the offset after flooring") {
  ScalarFn f = floor_alpha(0.5);
  CHECK(f(Point{-1.5}) == -1.5);   // 0.5 + floor(-1.5) = 0.5 - 2
  CHECK(f(Point{-0.01}) == -0.5);  // 0.5 + (-1)
  CHECK(f(Point{2.0}) == 2.5);
  CHECK(f(Point{2.999}) == 2.5);
  CHECK(f.params.at("alpha") == 0.5);
  // The alias "r" normalizes to x1 in the stored text.
  CHECK(f.text() == "alpha + floor(x1)");

  ScalarFn g = floor_alpha(-0.25);
  CHECK(g(Point{0.0}) == -0.25);
}

TEST_CASE("two-level piecewise spikes") {
  ScalarFn hi = piecewise_3_2();
  CHECK(hi(Point{0.0}) == 3.0);
  CHECK(hi(Point{-0.0}) == 3.0);  // -0 == 0 under the guard comparison
  CHECK(hi(Point{0.5}) == 2.0);
  CHECK(hi(Point{-1.0}) == 2.0);
  CHECK(hi.text() == "piecewise((x1 == 0, 3), 2)");

  ScalarFn lo = piecewise_2_1();
  CHECK(lo(Point{0.0}) == 2.0);
  CHECK(lo(Point{7.0}) == 1.0);
  CHECK(lo.text() == "piecewise((x1 == 0, 2), 1)");
}

TEST_CASE("shift map translates by the baked constant") {
  GMap g = shift_g(-0.02);
  CHECK(g.eval(Point{1.0}) == Point{0.98});
  CHECK(g.eval(Point{0.02}) == Point{0.0});
  CHECK_FALSE(g.is_identity());
  CHECK(g.params.at("c") == -0.02);

  GMap h = shift_g(3.0);
  CHECK(h.eval(Point{-1.0}) == Point{2.0});
}

TEST_CASE("identity map is recognized structurally") {
  GMap one = identity_g(1);
  CHECK(one.is_identity());
  CHECK(one.eval(Point{0.3}) == Point{0.3});

  GMap three = identity_g(3);
  CHECK(three.is_identity());
  CHECK(three.eval(Point{1.0, 2.0, 3.0}) == Point{1.0, 2.0, 3.0});

  // A shift is not the identity even where it happens to agree.
  CHECK_FALSE(shift_g(0.0).is_identity());
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(ScalarFn::make(nullptr, 1), InputError);
  CHECK_THROWS_AS(GMap::make({}), InputError);
  CHECK_THROWS_AS(GMap::parse({"x1", "x2"}, 1), InputError);
}
