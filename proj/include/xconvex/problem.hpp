#pragma once

#include <map>
#include <string>
#include <vector>

#include "xconvex/fn.hpp"
#include "xconvex/geometry.hpp"
#include "xconvex/report.hpp"

namespace xconvex {

// A parsed and validated problem file.
//
// Schema (JSON): {
//   "domain": {"dim": n, "pieces": [piece...]} where a piece is a list of
//       {"lo": number|"-inf", "hi": number|"inf", "lo_closed"?, "hi_closed"?}
//       per axis (a bare interval object is accepted when n == 1),
//   "g": [expr per axis] or {"exprs": [...], "params": {...}},
//   "functions": {"name": expr or {"expr": ..., "params": {...}}},
//   "plan": SamplePlan fields (all optional),
//   "tolerances": {"eps_ineq", "eps_strict", "eps_val_eq"} (optional),
//   "tasks": [task...]
// }
// Tasks: {"task": "check-set"}
//        {"task": "classify", "function": name}
//        {"task": "levelsets", "function": name, "eta": [levels]?}
//        {"task": "epigraph", "function": name}
//        {"task": "optimize", "function": name, "mode": m, "nu": number}
//            with m in {xconvex, quasi_strict, semistrict, minimum_set,
//                       minimum_set_quasi, uniqueness}
//        {"task": "pareto", "functions": [names], "nu": number}
//        {"task": "harness", "theorem_id": id, ...} with ids
//            t42/t49   {"theta": {"expr", "params"?, "nondecreasing",
//                       "convex"}, "function": name}
//            t43a      {"functions": [two names]}
//            t43b      {"function": name, "coeffs": [alpha]}
//            t43c      {"functions": [names], "coeffs": [...]}
//            t44/t46   {"function": name, "eta": [levels]?}
//            t45/t47/t410    {"function": name, "nu": number}
//            t45m/t59  {"function": name}
//            t48/t58   {"function": name}
//            t53..t57  {"functions": [names], "nu": number, "mu": [...]?}
// "function" may be omitted anywhere when exactly one function is defined.
struct ProblemFile {
  DomainSet domain;
  GMap g;
  std::map<std::string, ScalarFn> functions;
  SamplePlan plan;
  Tolerances tol;
  std::vector<Json> tasks;
  Json normalized;  // canonical problem JSON; parsing it again round-trips

  static ProblemFile parse(const Json& j);
  static ProblemFile from_file(const std::string& path);
};

// Executes the tasks in order. The report embeds the normalized problem and
// one entry per task; nothing about the environment or timing is recorded.
Json run_problem(const ProblemFile& p);

// Re-verifies every falsified witness in a run report against the embedded
// problem: recomputes the combination point (1 ulp), the gap (4 ulps), and
// the violation at the stored tolerances.
Json verify_report_witnesses(const Json& report);

}  // namespace xconvex
