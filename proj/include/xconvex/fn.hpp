#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xconvex/expr.hpp"
#include "xconvex/geometry.hpp"
#include "xconvex/program.hpp"

namespace xconvex {

// Scalar function of a point, with parameter bindings baked in. Carries both
// the tree and the compiled form; they are interchangeable bit-for-bit.
struct ScalarFn {
  int dim = 1;
  ExprPtr body;
  ParamMap params;
  Program code;

  static ScalarFn make(ExprPtr body, int dim, ParamMap params = {});
  static ScalarFn parse(const std::string& text, int dim, ParamMap params = {});

  double operator()(std::span<const double> x) const { return code.run(x); }
  double operator()(const Point& p) const { return code.run(std::span<const double>(p)); }
  std::string text() const { return to_string(*body); }
};

// Component-wise map g : R^dim -> R^dim used to form combination points.
struct GMap {
  int dim = 1;
  std::vector<ExprPtr> components;
  ParamMap params;
  std::vector<Program> code;

  static GMap make(std::vector<ExprPtr> components, ParamMap params = {});
  static GMap parse(const std::vector<std::string>& texts, int dim,
                    ParamMap params = {});
  static GMap identity(int dim);

  void eval(std::span<const double> x, std::span<double> out) const;
  Point eval(const Point& p) const;
  bool is_identity() const;
};

// Sampling enrichments implied by a set of functions: integer lattice when
// floor/ceil appears anywhere, plus piecewise guard thresholds as breakpoints.
void enrich_plan(SamplePlan& plan, const DomainSet& M,
                 std::span<const ScalarFn> fns, const GMap* g);

}  // namespace xconvex
