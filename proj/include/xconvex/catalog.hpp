#pragma once

#include <string>

#include "xconvex/fn.hpp"

namespace xconvex {

// Named building blocks used across the worked cases and harnesses.
//
//   const_c(c)        phi(x) = c
//   identity_fn()     phi(r) = r                      (dimension 1)
//   floor_alpha(a)    phi(r) = a + floor(r)           (dimension 1)
//   piecewise_3_2()   phi(r) = 3 if r == 0 else 2     (dimension 1)
//   piecewise_2_1()   phi(r) = 2 if r == 0 else 1     (dimension 1)
//
//   shift_g(c)        g(r) = r + c                    (dimension 1)
//   identity_g(dim)   g(x) = x
ScalarFn const_c(double c, int dim = 1);
ScalarFn identity_fn();
ScalarFn floor_alpha(double alpha);
ScalarFn piecewise_3_2();
ScalarFn piecewise_2_1();

GMap shift_g(double c);
GMap identity_g(int dim = 1);

}  // namespace xconvex
