#pragma once

#include <string>

#include "json.hpp"
#include "xconvex/checker.hpp"
#include "xconvex/harness.hpp"
#include "xconvex/optimize.hpp"
#include "xconvex/sets.hpp"

namespace xconvex {

using Json = nlohmann::json;

std::string status_string(VerdictStatus s);
VerdictStatus status_from_string(const std::string& s);
std::string kind_string(WitnessKind k);
WitnessKind kind_from_string(const std::string& s);

Json to_json(const Witness& w);
Witness witness_from_json(const Json& j);
Json to_json(const ClassVerdict& v);
Json to_json(const ClassifyResult& r);
Json to_json(const LevelSetVerdict& v);
Json to_json(const BallCondition& b);
Json to_json(const EfficiencyVerdict& e);
Json to_json(const HarnessReport& h);

// Canonical text form: keys sorted, two-space indent, floating point numbers
// printed with 17 significant digits, -0 normalized, one trailing newline.
// Byte-identical for equal documents regardless of how they were built.
std::string canonical_dump(const Json& j);

// Flattens a run report to one CSV row per class verdict. A classify result
// contributes its ten class rows (the set check has its own task). Point
// coordinates are semicolon-joined.
std::string report_to_csv(const Json& report);

// 1 when any falsified status or red event appears anywhere, else 0.
int report_exit_code(const Json& report);

}  // namespace xconvex
