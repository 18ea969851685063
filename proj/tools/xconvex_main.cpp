#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xconvex/corpus.hpp"
#include "xconvex/errors.hpp"
#include "xconvex/problem.hpp"

namespace {

using xconvex::Json;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw xconvex::InputError("cannot write '" + out + "'");
  f << text;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw xconvex::InputError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw xconvex::InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

int cmd_run(const std::string& path, const std::string& format,
            const std::string& out, bool with_seed, std::uint64_t seed) {
  xconvex::ProblemFile p = xconvex::ProblemFile::from_file(path);
  if (with_seed) {
    p.plan.seed = seed;
    p.normalized["plan"]["seed"] = seed;
  }
  Json report = xconvex::run_problem(p);
  emit(format == "csv" ? xconvex::report_to_csv(report)
                       : xconvex::canonical_dump(report),
       out);
  return xconvex::report_exit_code(report);
}

int cmd_corpus(const std::string& out) {
  Json report = xconvex::run_corpus();
  emit(xconvex::canonical_dump(report), out);
  return 0;
}

int cmd_verify(const std::string& path, const std::string& case_id) {
  Json report = load_json(path);
  if (report.contains("cases")) {
    if (case_id.empty())
      throw xconvex::InputError("this report holds several cases; pass --case");
    const Json* found = nullptr;
    for (const Json& c : report.at("cases"))
      if (c.value("id", std::string()) == case_id) found = &c;
    if (!found) throw xconvex::InputError("no case '" + case_id + "' in report");
    report = found->at("report");
  }
  Json result = xconvex::verify_report_witnesses(report);
  std::cout << xconvex::canonical_dump(result);
  return result.value("ok", false) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"x-convexity checks, witness search, and reports"};
  app.require_subcommand(1);

  std::string path, out, case_id;
  std::string format = "json";
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run a problem file");
  run->add_option("problem", path, "problem file (JSON)")->required();
  run->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", out, "write the report here instead of stdout");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the sample plan seed");

  CLI::App* corpus =
      app.add_subcommand("corpus", "run the built-in example corpus");
  corpus->add_option("--out", out, "write the report here instead of stdout");

  CLI::App* verify = app.add_subcommand(
      "verify-witness", "recompute and check every witness in a report");
  verify->add_option("report", path, "report file (JSON)")->required();
  verify->add_option("--case", case_id, "corpus case id to verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(path, format, out, seed_opt->count() > 0, seed);
    if (corpus->parsed()) return cmd_corpus(out);
    return cmd_verify(path, case_id);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
