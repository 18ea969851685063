#pragma once

#include <string>
#include <vector>

#include "xconvex/problem.hpp"

namespace xconvex {

// One expected outcome for a built-in case: the named class check (or the
// "x_convex_set" membership check) should end in `claimed` status.
struct CorpusClaim {
  std::string class_name;
  VerdictStatus claimed = VerdictStatus::NoCounterexampleFound;
};

struct CorpusCase {
  std::string id;
  ProblemFile problem;
  std::vector<CorpusClaim> claims;
  std::vector<std::string> notes;
  // When set, the case re-evaluates this published candidate witness for the
  // x_convex inequality and reports whether it actually violates.
  bool recheck = false;
  std::vector<double> recheck_r, recheck_t;
  double recheck_delta = 0.0;
};

// The seven built-in cases, in a fixed order.
const std::vector<CorpusCase>& corpus_cases();

// Runs every case and returns
//   {"cases": [{"id", "report", "rows", "notes"}...],
//    "rows": all rows flattened,
//    "agree_count", "disagree_count"}
// where a claim row is {"case","kind":"claim","class","claimed","observed",
// "agree"} and the recheck row is {"case","kind":"paper_witness_recheck",
// "r","t","delta","combo","lhs","rhs","gap","violates","agree"} with
// agree=false when the candidate does not violate.
Json run_corpus();

// Flattens corpus rows to CSV (case,kind,class,claimed,observed,agree).
std::string corpus_to_csv(const Json& corpus_report);

}  // namespace xconvex
