#include "xconvex/report.hpp"

#include <cmath>
#include <cstdio>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"

namespace xconvex {

std::string status_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::NoCounterexampleFound:
      return "no_counterexample_found";
    case VerdictStatus::Falsified:
      return "falsified";
    case VerdictStatus::DomainEscape:
      return "domain_escape";
  }
  return "unknown";
}

VerdictStatus status_from_string(const std::string& s) {
  if (s == "no_counterexample_found") return VerdictStatus::NoCounterexampleFound;
  if (s == "falsified") return VerdictStatus::Falsified;
  if (s == "domain_escape") return VerdictStatus::DomainEscape;
  throw InputError("unknown status '" + s + "'");
}

std::string kind_string(WitnessKind k) {
  return k == WitnessKind::DomainEscape ? "domain_escape"
                                        : "inequality_violation";
}

WitnessKind kind_from_string(const std::string& s) {
  if (s == "domain_escape") return WitnessKind::DomainEscape;
  if (s == "inequality_violation") return WitnessKind::InequalityViolation;
  throw InputError("unknown witness kind '" + s + "'");
}

namespace {

Json point_json(const Point& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(v);
  return a;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a coordinate array");
  Point p;
  for (const Json& v : j) p.push_back(v.get<double>());
  return p;
}

}  // namespace

Json to_json(const Witness& w) {
  Json o;
  o["r"] = point_json(w.r);
  o["t"] = point_json(w.t);
  o["delta"] = w.delta;
  o["combo"] = point_json(w.combo);
  o["lhs"] = w.lhs;
  o["rhs"] = w.rhs;
  o["gap"] = w.gap;
  o["kind"] = kind_string(w.kind);
  return o;
}

Witness witness_from_json(const Json& j) {
  Witness w;
  w.r = point_from_json(j.at("r"));
  w.t = point_from_json(j.at("t"));
  w.delta = j.at("delta").get<double>();
  w.combo = point_from_json(j.at("combo"));
  w.lhs = j.at("lhs").get<double>();
  w.rhs = j.at("rhs").get<double>();
  w.gap = j.at("gap").get<double>();
  w.kind = j.contains("kind") ? kind_from_string(j.at("kind").get<std::string>())
                              : WitnessKind::InequalityViolation;
  return w;
}

Json to_json(const ClassVerdict& v) {
  Json o;
  o["class"] = v.class_name;
  o["status"] = status_string(v.status);
  if (v.witness) o["witness"] = to_json(*v.witness);
  o["triples_checked"] = v.triples_checked;
  o["combos_escaped"] = v.combos_escaped;
  if (v.worst_gap) o["worst_gap"] = *v.worst_gap;
  if (!v.notes.empty()) o["notes"] = v.notes;
  return o;
}

Json to_json(const ClassifyResult& r) {
  Json o;
  o["set_check"] = to_json(r.set_check);
  Json classes = Json::array();
  for (const ClassVerdict& v : r.classes) classes.push_back(to_json(v));
  o["classes"] = std::move(classes);
  o["consistent"] = r.consistent;
  if (!r.notes.empty()) o["notes"] = r.notes;
  return o;
}

Json to_json(const LevelSetVerdict& v) {
  Json o = to_json(v.verdict);
  o["eta"] = v.eta;
  return o;
}

Json to_json(const BallCondition& b) {
  Json o;
  o["nu"] = b.nu;
  o["max_observed"] = b.max_observed;
  o["holds_on_samples"] = b.holds_on_samples;
  return o;
}

Json to_json(const EfficiencyVerdict& e) {
  Json o;
  o["r"] = point_json(e.r);
  o["phi"] = point_json(e.phi);
  o["global_efficient"] = e.global_efficient;
  o["local_efficient"] = e.local_efficient;
  o["global_weakly"] = e.global_weakly;
  o["local_weakly"] = e.local_weakly;
  if (e.dominator) o["dominator"] = point_json(*e.dominator);
  return o;
}

Json to_json(const HarnessReport& h) {
  Json o;
  o["id"] = h.id;
  o["kind"] = h.kind;
  o["skipped"] = h.skipped;
  o["red_event"] = h.red_event;
  if (!h.skip_reasons.empty()) o["skip_reasons"] = h.skip_reasons;
  if (!h.red_notes.empty()) o["red_notes"] = h.red_notes;
  if (!h.notes.empty()) o["notes"] = h.notes;
  if (!h.metrics.empty()) {
    Json m;
    for (const auto& [k, v] : h.metrics) m[k] = v;
    o["metrics"] = std::move(m);
  }
  if (!h.verdicts.empty()) {
    Json vs = Json::array();
    for (const auto& [label, verdict] : h.verdicts) {
      Json row;
      row["label"] = label;
      row["verdict"] = to_json(verdict);
      vs.push_back(std::move(row));
    }
    o["verdicts"] = std::move(vs);
  }
  if (!h.red_witnesses.empty()) {
    Json ws = Json::array();
    for (const Witness& w : h.red_witnesses) ws.push_back(to_json(w));
    o["red_witnesses"] = std::move(ws);
  }
  return o;
}

namespace {

void dump_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_rec(const Json& j, std::string& out, int level) {
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float: {
      double d = j.get<double>();
      if (std::isfinite(d))
        out += format_double(d);
      else
        dump_string(format_double(d), out);
      return;
    }
    case Json::value_t::string:
      dump_string(j.get<std::string>(), out);
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      std::string pad((level + 1) * 2, ' ');
      bool first = true;
      for (const Json& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_rec(v, out, level + 1);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(level) * 2, ' ');
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::string pad((level + 1) * 2, ' ');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_string(it.key(), out);
        out += ": ";
        dump_rec(it.value(), out, level + 1);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(level) * 2, ' ');
      out += '}';
      return;
    }
    default:
      out += "null";
      return;
  }
}

std::string csv_number(const Json& j) {
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  return "";
}

std::string csv_point(const Json& j) {
  if (!j.is_array()) return "";
  std::string s;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (k) s += ';';
    s += csv_number(j[k]);
  }
  return s;
}

bool verdict_shaped(const Json& j) {
  return j.is_object() && j.contains("class") && j["class"].is_string() &&
         j.contains("status") && j["status"].is_string();
}

void csv_row(const Json& v, const std::string& context, std::string& out) {
  const Json* w = v.contains("witness") ? &v["witness"] : nullptr;
  out += context;
  out += ',' + v["class"].get<std::string>();
  out += ',' + v["status"].get<std::string>();
  out += ',';
  if (v.contains("eta")) out += csv_number(v["eta"]);
  out += ',';
  if (w) out += csv_number((*w)["delta"]);
  out += ',';
  if (w) out += csv_point((*w)["r"]);
  out += ',';
  if (w) out += csv_point((*w)["t"]);
  out += ',';
  if (w) out += csv_point((*w)["combo"]);
  out += ',';
  if (w) out += csv_number((*w)["lhs"]);
  out += ',';
  if (w) out += csv_number((*w)["rhs"]);
  out += ',';
  if (w) out += csv_number((*w)["gap"]);
  out += ',' + csv_number(v["triples_checked"]);
  out += ',' + csv_number(v["combos_escaped"]);
  out += '\n';
}

void csv_collect(const Json& j, const std::string& context, std::string& out) {
  if (j.is_array()) {
    for (const Json& v : j) csv_collect(v, context, out);
    return;
  }
  if (!j.is_object()) return;
  if (verdict_shaped(j)) {
    csv_row(j, context, out);
    return;
  }
  if (j.contains("classes")) {
    csv_collect(j["classes"], context, out);
    return;
  }
  if (j.contains("label") && j.contains("verdict")) {
    std::string next =
        context.empty() ? j["label"].get<std::string>()
                        : context + "/" + j["label"].get<std::string>();
    csv_collect(j["verdict"], next, out);
    return;
  }
  if (j.contains("task")) {
    std::string next = j["task"].get<std::string>();
    if (j.contains("theorem_id"))
      next += ":" + j["theorem_id"].get<std::string>();
    if (j.contains("result")) csv_collect(j["result"], next, out);
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "problem" || it.key() == "witness" ||
        it.key() == "red_witnesses")
      continue;
    csv_collect(it.value(), context, out);
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += '\n';
  return out;
}

std::string report_to_csv(const Json& report) {
  std::string out =
      "context,class,status,eta,delta,r,t,combo,lhs,rhs,gap,"
      "triples_checked,combos_escaped\n";
  csv_collect(report, "", out);
  return out;
}

int report_exit_code(const Json& report) {
  if (report.is_object()) {
    for (auto it = report.begin(); it != report.end(); ++it) {
      if (it.key() == "status" && it.value().is_string() &&
          it.value().get<std::string>() == "falsified")
        return 1;
      if (it.key() == "red_event" && it.value().is_boolean() &&
          it.value().get<bool>())
        return 1;
      if (report_exit_code(it.value()) != 0) return 1;
    }
    return 0;
  }
  if (report.is_array()) {
    for (const Json& v : report)
      if (report_exit_code(v) != 0) return 1;
    return 0;
  }
  return 0;
}

}  // namespace xconvex
