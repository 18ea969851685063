#include "xconvex/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "xconvex/algebra.hpp"
#include "xconvex/catalog.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/optimize.hpp"
#include "xconvex/sets.hpp"

namespace xconvex {
namespace {

double bound_value(const Json& b) {
  if (b.is_string()) {
    const std::string s = b.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    throw InputError("bound must be a number, \"inf\", or \"-inf\"");
  }
  if (b.is_number()) return b.get<double>();
  throw InputError("bound must be a number, \"inf\", or \"-inf\"");
}

Json bound_json(double v) {
  if (v == HUGE_VAL) return Json("inf");
  if (v == -HUGE_VAL) return Json("-inf");
  return Json(v);
}

Interval interval_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
    throw InputError("an interval needs lo and hi");
  double lo = bound_value(j.at("lo"));
  double hi = bound_value(j.at("hi"));
  bool lo_closed = j.value("lo_closed", std::isfinite(lo));
  bool hi_closed = j.value("hi_closed", std::isfinite(hi));
  return Interval::make(lo, hi, lo_closed, hi_closed);
}

DomainSet domain_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("domain must be an object");
  int dim = j.value("dim", 1);
  if (dim < 1) throw InputError("domain dim must be at least 1");
  if (!j.contains("pieces") || !j.at("pieces").is_array() ||
      j.at("pieces").empty())
    throw InputError("domain needs a non-empty pieces list");
  std::vector<Box> pieces;
  for (const Json& pj : j.at("pieces")) {
    Box box;
    if (pj.is_object()) {
      if (dim != 1)
        throw InputError("a bare interval piece needs dim == 1");
      box.push_back(interval_from_json(pj));
    } else if (pj.is_array()) {
      if (static_cast<int>(pj.size()) != dim)
        throw InputError("a piece needs one interval per axis");
      for (const Json& ij : pj) box.push_back(interval_from_json(ij));
    } else {
      throw InputError("a piece must be an interval or a list of intervals");
    }
    pieces.push_back(std::move(box));
  }
  return DomainSet::make(dim, std::move(pieces));
}

Json domain_json(const DomainSet& M) {
  Json o;
  o["dim"] = M.dim;
  Json pieces = Json::array();
  for (const Box& box : M.pieces) {
    Json pj = Json::array();
    for (const Interval& iv : box) {
      Json ij;
      ij["lo"] = bound_json(iv.lo);
      ij["hi"] = bound_json(iv.hi);
      ij["lo_closed"] = iv.lo_closed;
      ij["hi_closed"] = iv.hi_closed;
      pj.push_back(std::move(ij));
    }
    pieces.push_back(std::move(pj));
  }
  o["pieces"] = std::move(pieces);
  return o;
}

ParamMap params_from_json(const Json& j) {
  ParamMap out;
  if (!j.is_object()) throw InputError("params must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number())
      throw InputError("parameter '" + it.key() + "' must be a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

Json params_json(const ParamMap& m) {
  Json o = Json::object();
  for (const auto& [k, v] : m) o[k] = v;
  return o;
}

GMap gmap_from_json(const Json& j, int dim) {
  std::vector<std::string> texts;
  ParamMap params;
  const Json* exprs = &j;
  if (j.is_object()) {
    if (!j.contains("exprs")) throw InputError("g needs an exprs list");
    exprs = &j.at("exprs");
    if (j.contains("params")) params = params_from_json(j.at("params"));
  }
  if (!exprs->is_array() || static_cast<int>(exprs->size()) != dim)
    throw InputError("g needs one expression per axis");
  for (const Json& e : *exprs) {
    if (!e.is_string()) throw InputError("g expressions must be strings");
    texts.push_back(e.get<std::string>());
  }
  return GMap::parse(texts, dim, std::move(params));
}

Json gmap_json(const GMap& g) {
  Json exprs = Json::array();
  for (const ExprPtr& c : g.components) exprs.push_back(to_string(*c));
  if (g.params.empty()) return exprs;
  Json o;
  o["exprs"] = std::move(exprs);
  o["params"] = params_json(g.params);
  return o;
}

ScalarFn fn_from_json(const Json& j, int dim) {
  if (j.is_string()) return ScalarFn::parse(j.get<std::string>(), dim);
  if (j.is_object() && j.contains("expr") && j.at("expr").is_string()) {
    ParamMap params;
    if (j.contains("params")) params = params_from_json(j.at("params"));
    return ScalarFn::parse(j.at("expr").get<std::string>(), dim,
                           std::move(params));
  }
  throw InputError("a function must be an expression string or {expr, params}");
}

Json fn_json(const ScalarFn& f) {
  if (f.params.empty()) return Json(f.text());
  Json o;
  o["expr"] = f.text();
  o["params"] = params_json(f.params);
  return o;
}

SamplePlan plan_from_json(const Json& j, int dim) {
  SamplePlan p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw InputError("plan must be an object");
  p.grid_per_axis = j.value("grid_per_axis", p.grid_per_axis);
  p.delta_grid = j.value("delta_grid", p.delta_grid);
  p.random_count = j.value("random_count", p.random_count);
  p.seed = j.value("seed", p.seed);
  p.truncation_bound = j.value("truncation_bound", p.truncation_bound);
  p.integer_lattice = j.value("integer_lattice", p.integer_lattice);
  if (j.contains("breakpoints")) {
    const Json& bp = j.at("breakpoints");
    if (!bp.is_array() || static_cast<int>(bp.size()) != dim)
      throw InputError("breakpoints need one list per axis");
    for (const Json& axis : bp) {
      if (!axis.is_array()) throw InputError("breakpoints must be lists");
      std::vector<double> vals;
      for (const Json& v : axis) vals.push_back(v.get<double>());
      p.breakpoints.push_back(std::move(vals));
    }
  }
  if (p.grid_per_axis < 1) throw InputError("grid_per_axis must be positive");
  if (p.delta_grid < 2) throw InputError("delta_grid must be at least 2");
  if (p.random_count < 0) throw InputError("random_count must be nonnegative");
  if (!(p.truncation_bound > 0))
    throw InputError("truncation_bound must be positive");
  return p;
}

Json plan_json(const SamplePlan& p) {
  Json o;
  o["grid_per_axis"] = p.grid_per_axis;
  o["delta_grid"] = p.delta_grid;
  o["random_count"] = p.random_count;
  o["seed"] = p.seed;
  o["truncation_bound"] = p.truncation_bound;
  o["integer_lattice"] = p.integer_lattice;
  if (!p.breakpoints.empty()) {
    Json bp = Json::array();
    for (const auto& axis : p.breakpoints) {
      Json a = Json::array();
      for (double v : axis) a.push_back(v);
      bp.push_back(std::move(a));
    }
    o["breakpoints"] = std::move(bp);
  }
  return o;
}

Tolerances tol_from_json(const Json& j) {
  Tolerances t;
  if (j.is_null()) return t;
  if (!j.is_object()) throw InputError("tolerances must be an object");
  t.eps_ineq = j.value("eps_ineq", t.eps_ineq);
  t.eps_strict = j.value("eps_strict", t.eps_strict);
  t.eps_val_eq = j.value("eps_val_eq", t.eps_val_eq);
  if (!(t.eps_ineq >= 0) || !(t.eps_strict >= 0) || !(t.eps_val_eq >= 0))
    throw InputError("tolerances must be nonnegative");
  return t;
}

Json tol_json(const Tolerances& t) {
  Json o;
  o["eps_ineq"] = t.eps_ineq;
  o["eps_strict"] = t.eps_strict;
  o["eps_val_eq"] = t.eps_val_eq;
  return o;
}

const ScalarFn& resolve_fn(const ProblemFile& p, const Json& t,
                           const char* key = "function") {
  if (t.contains(key)) {
    const std::string name = t.at(key).get<std::string>();
    auto it = p.functions.find(name);
    if (it == p.functions.end())
      throw InputError("unknown function '" + name + "'");
    return it->second;
  }
  if (p.functions.size() == 1) return p.functions.begin()->second;
  throw InputError("task needs an explicit function name");
}

std::vector<ScalarFn> resolve_fns(const ProblemFile& p, const Json& t) {
  if (!t.contains("functions") || !t.at("functions").is_array())
    throw InputError("task needs a functions list");
  std::vector<ScalarFn> out;
  for (const Json& n : t.at("functions")) {
    const std::string name = n.get<std::string>();
    auto it = p.functions.find(name);
    if (it == p.functions.end())
      throw InputError("unknown function '" + name + "'");
    out.push_back(it->second);
  }
  if (out.empty()) throw InputError("task needs at least one function");
  return out;
}

std::vector<double> doubles_of(const Json& j) {
  std::vector<double> out;
  if (!j.is_array()) throw InputError("expected a list of numbers");
  for (const Json& v : j) out.push_back(v.get<double>());
  return out;
}

double require_nu(const Json& t) {
  if (!t.contains("nu") || !t.at("nu").is_number())
    throw InputError("task needs a numeric nu");
  return t.at("nu").get<double>();
}

bool closure_id(const std::string& id) {
  return id == "t42" || id == "t43a" || id == "t43b" || id == "t43c" ||
         id == "t49";
}

bool efficiency_id(const std::string& id) {
  return id == "t53" || id == "t54" || id == "t55" || id == "t56" ||
         id == "t57";
}

void validate_task(const ProblemFile& p, const Json& t) {
  if (!t.is_object() || !t.contains("task") || !t.at("task").is_string())
    throw InputError("every task needs a task kind");
  const std::string task = t.at("task").get<std::string>();
  if (task == "check-set") return;
  if (task == "classify" || task == "levelsets" || task == "epigraph") {
    resolve_fn(p, t);
    if (t.contains("eta")) doubles_of(t.at("eta"));
    return;
  }
  if (task == "optimize") {
    resolve_fn(p, t);
    const std::string mode = t.value("mode", std::string("xconvex"));
    if (mode == "xconvex" || mode == "quasi_strict" || mode == "semistrict") {
      require_nu(t);
      return;
    }
    if (mode == "minimum_set" || mode == "minimum_set_quasi" ||
        mode == "uniqueness")
      return;
    throw InputError("unknown optimize mode '" + mode + "'");
  }
  if (task == "pareto") {
    resolve_fns(p, t);
    require_nu(t);
    return;
  }
  if (task == "harness") {
    if (!t.contains("theorem_id") || !t.at("theorem_id").is_string())
      throw InputError("a harness task needs a theorem_id");
    const std::string id = t.at("theorem_id").get<std::string>();
    if (closure_id(id)) {
      if (id == "t42" || id == "t49") {
        if (!t.contains("theta")) throw InputError(id + " needs a theta");
        resolve_fn(p, t);
      } else if (id == "t43a") {
        if (resolve_fns(p, t).size() != 2)
          throw InputError("t43a needs exactly two functions");
      } else if (id == "t43b") {
        resolve_fn(p, t);
        if (doubles_of(t.at("coeffs")).size() != 1)
          throw InputError("t43b needs exactly one coefficient");
      } else {
        if (resolve_fns(p, t).size() != doubles_of(t.at("coeffs")).size())
          throw InputError("t43c needs one coefficient per function");
      }
      return;
    }
    if (id == "t44" || id == "t46" || id == "t45m" || id == "t59" ||
        id == "t48" || id == "t58") {
      resolve_fn(p, t);
      if (t.contains("eta")) doubles_of(t.at("eta"));
      return;
    }
    if (id == "t45" || id == "t47" || id == "t410") {
      resolve_fn(p, t);
      require_nu(t);
      return;
    }
    if (efficiency_id(id)) {
      resolve_fns(p, t);
      require_nu(t);
      if (t.contains("mu")) doubles_of(t.at("mu"));
      return;
    }
    throw InputError("unknown theorem_id '" + id + "'");
  }
  throw InputError("unknown task '" + task + "'");
}

OuterFn theta_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("expr"))
    throw InputError("theta needs an expr");
  ParamMap params;
  if (j.contains("params")) params = params_from_json(j.at("params"));
  ScalarFn f =
      ScalarFn::parse(j.at("expr").get<std::string>(), 1, std::move(params));
  return OuterFn::make(std::move(f), j.value("nondecreasing", false),
                       j.value("convex", false));
}

Json run_harness(const ProblemFile& p, const Json& t) {
  const std::string id = t.at("theorem_id").get<std::string>();
  HarnessReport rep;
  if (closure_id(id)) {
    ClosureInputs in;
    if (id == "t42" || id == "t49") {
      in.theta = theta_from_json(t.at("theta"));
      in.phis.push_back(resolve_fn(p, t));
    } else if (id == "t43a") {
      in.phis = resolve_fns(p, t);
    } else if (id == "t43b") {
      in.phis.push_back(resolve_fn(p, t));
      in.coeffs = doubles_of(t.at("coeffs"));
    } else {
      in.phis = resolve_fns(p, t);
      in.coeffs = doubles_of(t.at("coeffs"));
    }
    rep = theorem_closure_harness(in, p.g, p.domain, p.plan, p.tol, id);
  } else if (id == "t44" || id == "t46") {
    std::vector<double> eta;
    if (t.contains("eta")) eta = doubles_of(t.at("eta"));
    rep = quasi_iff_levelsets_harness(resolve_fn(p, t), p.g, p.domain, p.plan,
                                      p.tol, std::move(eta));
  } else if (id == "t45" || id == "t47" || id == "t410") {
    LocalGlobalMode mode = id == "t45"   ? LocalGlobalMode::XConvex
                           : id == "t47" ? LocalGlobalMode::QuasiStrict
                                         : LocalGlobalMode::Semistrict;
    rep = local_global_harness(resolve_fn(p, t), p.g, p.domain, p.plan, p.tol,
                               require_nu(t), mode);
  } else if (id == "t45m" || id == "t59") {
    rep = minimum_set_x_convex_harness(resolve_fn(p, t), p.g, p.domain, p.plan,
                                       p.tol,
                                       id == "t45m" ? ConvexClass::XConvex
                                                    : ConvexClass::QuasiXConvex);
  } else if (id == "t48" || id == "t58") {
    rep = uniqueness_harness(resolve_fn(p, t), p.g, p.domain, p.plan, p.tol);
  } else {
    ObjectiveVector Phi{resolve_fns(p, t), p.g};
    std::vector<double> mu;
    if (t.contains("mu")) mu = doubles_of(t.at("mu"));
    rep = efficiency_theorem_harness(Phi, p.domain, p.plan, p.tol,
                                     require_nu(t), id, mu);
  }
  rep.id = id;
  return to_json(rep);
}

Json run_task(const ProblemFile& p, const Json& t) {
  const std::string task = t.at("task").get<std::string>();
  if (task == "check-set")
    return to_json(check_x_convex_set(p.domain, p.g, p.plan));
  if (task == "classify")
    return to_json(classify(resolve_fn(p, t), p.g, p.domain, p.plan, p.tol));
  if (task == "levelsets") {
    std::vector<double> eta;
    if (t.contains("eta")) eta = doubles_of(t.at("eta"));
    return to_json(quasi_iff_levelsets_harness(resolve_fn(p, t), p.g, p.domain,
                                               p.plan, p.tol, std::move(eta)));
  }
  if (task == "epigraph")
    return to_json(
        check_epigraph_x_convex(resolve_fn(p, t), p.g, p.domain, p.plan, p.tol));
  if (task == "optimize") {
    const std::string mode = t.value("mode", std::string("xconvex"));
    if (mode == "minimum_set" || mode == "minimum_set_quasi")
      return to_json(minimum_set_x_convex_harness(
          resolve_fn(p, t), p.g, p.domain, p.plan, p.tol,
          mode == "minimum_set" ? ConvexClass::XConvex
                                : ConvexClass::QuasiXConvex));
    if (mode == "uniqueness")
      return to_json(
          uniqueness_harness(resolve_fn(p, t), p.g, p.domain, p.plan, p.tol));
    LocalGlobalMode lg = mode == "xconvex" ? LocalGlobalMode::XConvex
                         : mode == "quasi_strict" ? LocalGlobalMode::QuasiStrict
                                                  : LocalGlobalMode::Semistrict;
    return to_json(local_global_harness(resolve_fn(p, t), p.g, p.domain, p.plan,
                                        p.tol, require_nu(t), lg));
  }
  if (task == "pareto") {
    ObjectiveVector Phi{resolve_fns(p, t), p.g};
    double nu = require_nu(t);
    std::vector<EfficiencyVerdict> scan =
        efficiency_scan(Phi, p.domain, p.plan, nu);
    Json o;
    o["nu"] = nu;
    Json records = Json::array();
    std::uint64_t efficient = 0;
    for (const EfficiencyVerdict& e : scan) {
      if (e.global_efficient) ++efficient;
      records.push_back(to_json(e));
    }
    o["efficient_count"] = efficient;
    o["records"] = std::move(records);
    return o;
  }
  return run_harness(p, t);
}

}  // namespace

ProblemFile ProblemFile::parse(const Json& j) {
  if (!j.is_object()) throw InputError("a problem file must be a JSON object");
  ProblemFile p;
  if (!j.contains("domain")) throw InputError("problem needs a domain");
  p.domain = domain_from_json(j.at("domain"));
  if (!j.contains("g")) throw InputError("problem needs a g map");
  p.g = gmap_from_json(j.at("g"), p.domain.dim);
  if (j.contains("functions")) {
    const Json& fns = j.at("functions");
    if (!fns.is_object()) throw InputError("functions must be an object");
    for (auto it = fns.begin(); it != fns.end(); ++it)
      p.functions.emplace(it.key(), fn_from_json(it.value(), p.domain.dim));
  }
  p.plan = plan_from_json(j.value("plan", Json()), p.domain.dim);
  p.tol = tol_from_json(j.value("tolerances", Json()));
  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
    throw InputError("problem needs a non-empty tasks list");
  for (const Json& t : j.at("tasks")) {
    p.tasks.push_back(t);
  }
  for (const Json& t : p.tasks) validate_task(p, t);

  Json norm;
  norm["domain"] = domain_json(p.domain);
  norm["g"] = gmap_json(p.g);
  if (!p.functions.empty()) {
    Json fns;
    for (const auto& [name, f] : p.functions) fns[name] = fn_json(f);
    norm["functions"] = std::move(fns);
  }
  norm["plan"] = plan_json(p.plan);
  norm["tolerances"] = tol_json(p.tol);
  norm["tasks"] = j.at("tasks");
  p.normalized = std::move(norm);
  return p;
}

ProblemFile ProblemFile::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse(j);
}

Json run_problem(const ProblemFile& p) {
  Json report;
  report["problem"] = p.normalized;
  Json tasks = Json::array();
  for (const Json& t : p.tasks) {
    Json entry;
    entry["task"] = t.at("task");
    if (t.contains("theorem_id")) entry["theorem_id"] = t.at("theorem_id");
    entry["result"] = run_task(p, t);
    tasks.push_back(std::move(entry));
  }
  report["tasks"] = std::move(tasks);
  return report;
}

namespace {

bool class_by_name(const std::string& name, ConvexClass& out) {
  for (int c = 0; c < kClassCount; ++c) {
    ConvexClass cc = static_cast<ConvexClass>(c);
    if (name == class_name(cc)) {
      out = cc;
      return true;
    }
  }
  return false;
}

void verify_verdict(const ProblemFile& p, const Json& task, const Json& v,
                    Json& rows, bool& ok) {
  if (!v.is_object() || !v.contains("status") ||
      v.at("status").get<std::string>() != "falsified" || !v.contains("witness"))
    return;
  const std::string cname = v.at("class").get<std::string>();
  Witness w = witness_from_json(v.at("witness"));
  ConvexClass cls;
  ScalarFn phi;
  if (cname == "x_convex_set") {
    cls = ConvexClass::XConvex;  // escapes never evaluate the function
    phi = const_c(0.0, p.domain.dim);
  } else if (class_by_name(cname, cls)) {
    phi = resolve_fn(p, task);
  } else {
    return;  // level/epigraph witnesses are not claim rows
  }
  WitnessCheck wc = verify_witness(phi, p.g, p.domain, p.tol, cls, w);
  Json row;
  row["class"] = cname;
  row["violates"] = wc.violates;
  row["combo_matches"] = wc.combo_matches;
  row["gap_matches"] = wc.gap_matches;
  row["recomputed_gap"] = wc.recomputed_gap;
  if (!wc.detail.empty()) row["detail"] = wc.detail;
  rows.push_back(std::move(row));
  ok = ok && wc.violates && wc.combo_matches && wc.gap_matches;
}

}  // namespace

Json verify_report_witnesses(const Json& report) {
  if (!report.is_object() || !report.contains("problem"))
    throw InputError("report does not embed a problem");
  ProblemFile p = ProblemFile::parse(report.at("problem"));
  Json rows = Json::array();
  bool ok = true;
  if (report.contains("tasks")) {
    const Json& entries = report.at("tasks");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Json& entry = entries[i];
      if (!entry.contains("result") || i >= p.tasks.size()) continue;
      const Json& tspec = p.tasks[i];
      const std::string task = entry.value("task", std::string());
      const Json& res = entry.at("result");
      if (task == "check-set") {
        verify_verdict(p, tspec, res, rows, ok);
      } else if (task == "classify") {
        if (res.contains("set_check"))
          verify_verdict(p, tspec, res.at("set_check"), rows, ok);
        if (res.contains("classes"))
          for (const Json& v : res.at("classes"))
            verify_verdict(p, tspec, v, rows, ok);
      }
    }
  }
  Json out;
  out["rows"] = std::move(rows);
  out["ok"] = ok;
  return out;
}

}  // namespace xconvex
