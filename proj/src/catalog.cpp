#include "xconvex/catalog.hpp"

#include <algorithm>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"

namespace xconvex {

ScalarFn ScalarFn::make(ExprPtr body, int dim, ParamMap params) {
  if (!body) throw InputError("scalar function needs a body");
  ScalarFn f;
  f.dim = dim;
  f.body = std::move(body);
  f.params = std::move(params);
  f.code = compile_program(*f.body, dim, f.params);
  return f;
}

ScalarFn ScalarFn::parse(const std::string& text, int dim, ParamMap params) {
  std::vector<std::string> names;
  names.reserve(params.size());
  for (const auto& [k, v] : params) names.push_back(k);
  return make(parse_expr(text, dim, names), dim, std::move(params));
}

GMap GMap::make(std::vector<ExprPtr> components, ParamMap params) {
  if (components.empty()) throw InputError("map needs at least one component");
  GMap g;
  g.dim = static_cast<int>(components.size());
  g.components = std::move(components);
  g.params = std::move(params);
  g.code.reserve(g.components.size());
  for (const ExprPtr& c : g.components)
    g.code.push_back(compile_program(*c, g.dim, g.params));
  return g;
}

GMap GMap::parse(const std::vector<std::string>& texts, int dim, ParamMap params) {
  if (static_cast<int>(texts.size()) != dim)
    throw InputError("map needs one component per axis");
  std::vector<std::string> names;
  names.reserve(params.size());
  for (const auto& [k, v] : params) names.push_back(k);
  std::vector<ExprPtr> comps;
  comps.reserve(texts.size());
  for (const std::string& t : texts) comps.push_back(parse_expr(t, dim, names));
  return make(std::move(comps), std::move(params));
}

GMap GMap::identity(int dim) {
  std::vector<ExprPtr> comps;
  comps.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) comps.push_back(make_var(i));
  return make(std::move(comps));
}

void GMap::eval(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < code.size(); ++i) out[i] = code[i].run(x);
}

Point GMap::eval(const Point& p) const {
  Point out(p.size());
  eval(std::span<const double>(p), std::span<double>(out));
  return out;
}

bool GMap::is_identity() const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i]->kind != ExprKind::Var ||
        components[i]->var != static_cast<int>(i))
      return false;
  return true;
}

void enrich_plan(SamplePlan& plan, const DomainSet& M,
                 std::span<const ScalarFn> fns, const GMap* g) {
  if (plan.breakpoints.empty())
    plan.breakpoints.resize(static_cast<std::size_t>(M.dim));
  auto absorb = [&](const ExprFeatures& f) {
    if (f.has_floor_or_ceil) plan.integer_lattice = true;
    for (std::size_t ax = 0; ax < f.guard_values.size(); ++ax)
      for (double v : f.guard_values[ax])
        plan.breakpoints[ax].push_back(canonical_zero(v));
  };
  for (const ScalarFn& f : fns) absorb(scan_features(*f.body, M.dim, f.params));
  if (g)
    for (const ExprPtr& c : g->components)
      absorb(scan_features(*c, M.dim, g->params));
  for (auto& bp : plan.breakpoints) {
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  }
}

ScalarFn const_c(double c, int dim) { return ScalarFn::make(make_number(c), dim); }

ScalarFn identity_fn() { return ScalarFn::make(make_var(0), 1); }

ScalarFn floor_alpha(double alpha) {
  return ScalarFn::parse("alpha + floor(r)", 1, {{"alpha", alpha}});
}

ScalarFn piecewise_3_2() {
  return ScalarFn::parse("piecewise((r == 0, 3), 2)", 1);
}

ScalarFn piecewise_2_1() {
  return ScalarFn::parse("piecewise((r == 0, 2), 1)", 1);
}

GMap shift_g(double c) { return GMap::parse({"r + c"}, 1, {{"c", c}}); }

GMap identity_g(int dim) { return GMap::identity(dim); }

}  // namespace xconvex
