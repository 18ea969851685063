#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xconvex/checker.hpp"

namespace xconvex {

// Common result shape of the empirical property harnesses. A harness runs
// hypothesis checks, builds a derived object, runs the concluded check, and
// asserts the implication on the sampled scale. A red event means the
// conclusion failed while every hypothesis held; each red event carries an
// explanatory note and, when available, a witness.
struct HarnessReport {
  std::string id;
  std::string kind;
  bool skipped = false;
  std::vector<std::string> skip_reasons;
  bool red_event = false;
  std::vector<std::string> red_notes;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, ClassVerdict>> verdicts;
  std::map<std::string, double> metrics;
  std::vector<Witness> red_witnesses;

  void skip(std::string reason) {
    skipped = true;
    skip_reasons.push_back(std::move(reason));
  }
  void red(std::string note) {
    red_event = true;
    red_notes.push_back(std::move(note));
  }
};

}  // namespace xconvex
