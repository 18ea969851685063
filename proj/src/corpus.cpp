#include "xconvex/corpus.hpp"

#include <sstream>
#include <utility>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"

namespace xconvex {
namespace {

Json bound(double v) {
  if (v == HUGE_VAL) return Json("inf");
  if (v == -HUGE_VAL) return Json("-inf");
  return Json(v);
}

Json iv(double lo, double hi) {
  Json o;
  o["lo"] = bound(lo);
  o["hi"] = bound(hi);
  return o;
}

Json piece1(Json interval) {
  Json p = Json::array();
  p.push_back(std::move(interval));
  return p;
}

Json domain2(Json a, Json b) {
  Json d;
  d["dim"] = 1;
  Json pieces = Json::array();
  pieces.push_back(piece1(std::move(a)));
  pieces.push_back(piece1(std::move(b)));
  d["pieces"] = std::move(pieces);
  return d;
}

Json base_plan(bool lattice) {
  Json p;
  p["grid_per_axis"] = 101;
  p["delta_grid"] = 501;
  p["random_count"] = 0;
  p["seed"] = 42;
  p["truncation_bound"] = 1000.0;
  p["integer_lattice"] = lattice;
  return p;
}

Json exact_tol() {
  Json t;
  t["eps_ineq"] = 1e-9;
  t["eps_strict"] = 1e-9;
  t["eps_val_eq"] = 0.0;
  return t;
}

Json classify_task() {
  Json t;
  t["task"] = "classify";
  Json arr = Json::array();
  arr.push_back(std::move(t));
  return arr;
}

Json floor_phi() {
  Json f;
  f["expr"] = "alpha + floor(x1)";
  f["params"] = Json::object({{"alpha", 0.5}});
  return f;
}

const char* kFloorNote = "phi reads the greatest-integer bracket as floor";

std::vector<CorpusCase> build_cases() {
  std::vector<CorpusCase> out;

  {
    CorpusCase c;
    c.id = "set_1_2_3_inf";
    Json p;
    p["domain"] = domain2(iv(1, 2), iv(3, HUGE_VAL));
    p["g"] = Json::array({"x1 + 3"});
    p["plan"] = base_plan(false);
    p["tolerances"] = exact_tol();
    Json t;
    t["task"] = "check-set";
    p["tasks"] = Json::array({std::move(t)});
    c.problem = ProblemFile::parse(p);
    c.claims = {{"x_convex_set", VerdictStatus::NoCounterexampleFound}};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "const_on_union";
    Json p;
    p["domain"] = domain2(iv(1, 2), iv(3, HUGE_VAL));
    p["g"] = Json::array({"x1 + 3"});
    Json f;
    f["expr"] = "c";
    f["params"] = Json::object({{"c", 2.0}});
    p["functions"] = Json::object({{"phi", std::move(f)}});
    p["plan"] = base_plan(false);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {{"x_convex", VerdictStatus::NoCounterexampleFound}};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "identity_strict";
    Json p;
    Json d;
    d["dim"] = 1;
    d["pieces"] = Json::array({piece1(iv(0, 10))});
    p["domain"] = std::move(d);
    Json g;
    g["exprs"] = Json::array({"x1 - alpha"});
    g["params"] = Json::object({{"alpha", 0.5}});
    p["g"] = std::move(g);
    p["functions"] = Json::object({{"phi", "x1"}});
    p["plan"] = base_plan(false);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {{"strictly_x_convex", VerdictStatus::NoCounterexampleFound}};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "floor_quasi_g3";
    Json p;
    p["domain"] = domain2(iv(-HUGE_VAL, -3), iv(-2, -1));
    p["g"] = Json::array({"x1 - 3"});
    p["functions"] = Json::object({{"phi", floor_phi()}});
    p["plan"] = base_plan(true);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {{"quasi_x_convex", VerdictStatus::NoCounterexampleFound}};
    c.notes = {kFloorNote};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "floor_quasi_not_x";
    Json p;
    p["domain"] = domain2(iv(-HUGE_VAL, -0.02), iv(-0.01, 0));
    p["g"] = Json::array({"x1 - 0.02"});
    p["functions"] = Json::object({{"phi", floor_phi()}});
    p["plan"] = base_plan(true);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {{"quasi_x_convex", VerdictStatus::NoCounterexampleFound},
                {"x_convex", VerdictStatus::Falsified}};
    c.recheck = true;
    c.recheck_r = {-1.5};
    c.recheck_t = {-2.5};
    c.recheck_delta = 0.502;
    c.notes = {kFloorNote,
               "the claimed counterexample at delta=0.502, r=-1.5, t=-2.5 is "
               "re-evaluated as a separate row"};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "piecewise_3_2";
    Json p;
    p["domain"] = domain2(iv(-1, -0.5), iv(0, HUGE_VAL));
    p["g"] = Json::array({"x1 + 1"});
    p["functions"] = Json::object({{"phi", "piecewise((x1 == 0, 3), 2)"}});
    p["plan"] = base_plan(false);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {
        {"semistrictly_quasi_x_convex", VerdictStatus::NoCounterexampleFound},
        {"strictly_quasi_x_convex", VerdictStatus::Falsified},
        {"quasi_x_convex", VerdictStatus::Falsified}};
    out.push_back(std::move(c));
  }

  {
    CorpusCase c;
    c.id = "piecewise_2_1";
    Json p;
    p["domain"] = domain2(iv(0, 2), iv(5, HUGE_VAL));
    p["g"] = Json::array({"x1 + 5"});
    p["functions"] = Json::object({{"phi", "piecewise((x1 == 0, 2), 1)"}});
    p["plan"] = base_plan(false);
    p["tolerances"] = exact_tol();
    p["tasks"] = classify_task();
    c.problem = ProblemFile::parse(p);
    c.claims = {
        {"semistrictly_quasi_x_convex", VerdictStatus::NoCounterexampleFound},
        {"strictly_quasi_x_convex", VerdictStatus::Falsified},
        {"strictly_x_convex", VerdictStatus::Falsified}};
    c.notes = {
        "the claim that phi is not x_convex is recorded at strict strength; "
        "the non-strict inequality holds on this instance because phi of "
        "every combination is 1"};
    out.push_back(std::move(c));
  }

  return out;
}

std::string observed_status(const Json& rep, const std::string& cls) {
  for (const Json& entry : rep.at("tasks")) {
    const Json& res = entry.at("result");
    const std::string task = entry.at("task").get<std::string>();
    if (task == "check-set" && cls == "x_convex_set")
      return res.at("status").get<std::string>();
    if (task == "classify") {
      if (cls == "x_convex_set")
        return res.at("set_check").at("status").get<std::string>();
      for (const Json& v : res.at("classes"))
        if (v.at("class").get<std::string>() == cls)
          return v.at("status").get<std::string>();
    }
  }
  throw InputError("no verdict for class '" + cls + "' in case report");
}

Json point_json(const Point& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(v);
  return a;
}

}  // namespace

const std::vector<CorpusCase>& corpus_cases() {
  static const std::vector<CorpusCase> cases = build_cases();
  return cases;
}

Json run_corpus() {
  Json out;
  Json all_rows = Json::array();
  Json case_arr = Json::array();
  std::uint64_t agree = 0, disagree = 0;
  for (const CorpusCase& c : corpus_cases()) {
    Json rep = run_problem(c.problem);
    Json rows = Json::array();
    for (const CorpusClaim& claim : c.claims) {
      Json row;
      row["case"] = c.id;
      row["kind"] = "claim";
      row["class"] = claim.class_name;
      row["claimed"] = status_string(claim.claimed);
      row["observed"] = observed_status(rep, claim.class_name);
      bool ok = row["claimed"] == row["observed"];
      row["agree"] = ok;
      (ok ? agree : disagree) += 1;
      rows.push_back(std::move(row));
    }
    if (c.recheck) {
      const ScalarFn& phi = c.problem.functions.begin()->second;
      TripleEval te =
          eval_triple(phi, c.problem.g, c.problem.domain, ConvexClass::XConvex,
                      c.recheck_r, c.recheck_t, c.recheck_delta);
      bool violates = te.in_domain && te.gap > c.problem.tol.eps_ineq;
      Json row;
      row["case"] = c.id;
      row["kind"] = "paper_witness_recheck";
      row["class"] = "x_convex";
      row["r"] = point_json(c.recheck_r);
      row["t"] = point_json(c.recheck_t);
      row["delta"] = c.recheck_delta;
      row["combo"] = point_json(te.combo);
      row["in_domain"] = te.in_domain;
      row["lhs"] = te.lhs;
      row["rhs"] = te.rhs;
      row["gap"] = te.gap;
      row["violates"] = violates;
      row["claimed"] = "violates";
      row["observed"] = violates ? "violates" : "does not violate";
      row["agree"] = violates;
      (violates ? agree : disagree) += 1;
      rows.push_back(std::move(row));
    }
    Json cj;
    cj["id"] = c.id;
    cj["report"] = std::move(rep);
    if (!c.notes.empty()) {
      Json notes = Json::array();
      for (const std::string& n : c.notes) notes.push_back(n);
      cj["notes"] = std::move(notes);
    }
    for (const Json& r : rows) all_rows.push_back(r);
    cj["rows"] = std::move(rows);
    case_arr.push_back(std::move(cj));
  }
  out["cases"] = std::move(case_arr);
  out["rows"] = std::move(all_rows);
  out["agree_count"] = agree;
  out["disagree_count"] = disagree;
  return out;
}

std::string corpus_to_csv(const Json& corpus_report) {
  std::ostringstream os;
  os << "case,kind,class,claimed,observed,agree\n";
  if (corpus_report.contains("rows"))
    for (const Json& r : corpus_report.at("rows")) {
      os << r.value("case", std::string()) << ','
         << r.value("kind", std::string()) << ','
         << r.value("class", std::string()) << ','
         << r.value("claimed", std::string()) << ','
         << r.value("observed", std::string()) << ','
         << (r.value("agree", false) ? "true" : "false") << '\n';
    }
  return os.str();
}

}  // namespace xconvex
