// Batch front-end: validate instance files, compute differentials, run the
// theorem suites. Exit codes: 0 ok, 1 suite assertion failed, 2 schema error,
// 3 metric-axiom violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "msc/suites.hpp"

namespace {

int cmd_validate(const std::string& path) {
  msc::Json j;
  try {
    j = msc::load_json_file(path);
  } catch (const msc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const msc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (j.is_object() && j.contains("map"))
      (void)msc::map_from_json(j);
    else
      (void)msc::space_from_json(j);
  } catch (const msc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const msc::TriangleViolation& e) {
    std::cerr << "metric violation: " << e.what() << "\n";
    return 3;
  } catch (const msc::Error& e) {
    std::cerr << "metric violation: " << e.what() << "\n";
    return 3;
  }
  std::cout << "ok\n";
  return 0;
}

int cmd_du(const std::string& path, const std::string& out,
           const std::optional<double>& eps_y) {
  msc::MetricMap u{};
  try {
    msc::Json j = msc::load_json_file(path);
    if (eps_y) j["target_epsilon"] = *eps_y;
    u = msc::map_from_json(j);
  } catch (const msc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const msc::Error& e) {
    std::cerr << "metric violation: " << e.what() << "\n";
    return 3;
  }
  msc::Differential du = msc::build_du(u);
  msc::Json rep = msc::du_report(du);
  if (out.empty())
    std::cout << rep.dump(2) << "\n";
  else
    msc::write_json_file(out, rep);
  return 0;
}

void print_suite(const msc::SuiteResult& r) {
  for (const auto& c : r.checks)
    std::printf("  [%s] %-55s n=%-6ld max_residual=%.3e tol=%.3e\n",
                c.pass ? "pass" : "FAIL", c.name.c_str(), c.count, c.max_residual,
                c.tolerance);
  for (const auto& note : r.notes) std::printf("  note: %s\n", note.c_str());
  std::printf("suite %-10s %s\n", r.suite.c_str(), r.pass ? "PASS" : "FAIL");
}

int cmd_check(const std::string& suite, uint64_t seed, int n, const std::string& out,
              const std::string& replay, int grid_n) {
  std::vector<msc::SuiteResult> results;
  try {
    if (!replay.empty()) {
      results.push_back(msc::replay_artifact(replay));
    } else if (suite == "modules") {
      results.push_back(msc::run_modules_suite(seed, n));
    } else if (suite == "du") {
      results.push_back(msc::run_du_suite(seed, n));
    } else if (suite == "scalar") {
      results.push_back(msc::run_scalar_suite(seed, n));
    } else if (suite == "bd") {
      results.push_back(msc::run_bd_suite(seed, n));
    } else if (suite == "local") {
      results.push_back(msc::run_local_suite(seed, n));
    } else if (suite == "kirchheim") {
      results.push_back(msc::run_kirchheim_suite(3, grid_n));
    } else if (suite == "all") {
      results.push_back(msc::run_modules_suite(seed, n));
      results.push_back(msc::run_du_suite(seed, n));
      results.push_back(msc::run_scalar_suite(seed, n));
      results.push_back(msc::run_bd_suite(seed, std::max(1, n / 2)));
      results.push_back(msc::run_local_suite(seed, std::max(1, n / 4)));
      results.push_back(msc::run_kirchheim_suite(3, grid_n));
    } else {
      std::cerr << "unknown suite: " << suite << "\n";
      return 2;
    }
  } catch (const msc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  }

  bool pass = true;
  msc::Json doc = msc::Json::array();
  for (const auto& r : results) {
    print_suite(r);
    doc.push_back(msc::suite_to_json(r));
    pass = pass && r.pass;
    for (const auto& row : r.csv) std::cout << row << "\n";
  }
  if (!out.empty()) msc::write_json_file(out, doc);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev calculus on finite metric measure spaces"};
  app.require_subcommand(1);

  std::string path, out, suite = "all", replay;
  uint64_t seed = 7;
  int n = 50;
  int grid_n = 17;
  double eps_y_val = 0.0;
  bool eps_y_set = false;

  auto* validate = app.add_subcommand("validate", "validate an instance file");
  validate->add_option("path", path, "space or map JSON document")->required();

  auto* du = app.add_subcommand("du", "compute the differential of a map instance");
  du->add_option("path", path, "map JSON document")->required();
  du->add_option("--out", out, "write the report to this file");
  auto* epsopt = du->add_option("--epsilon-y", eps_y_val, "override the target scale");

  auto* check = app.add_subcommand("check", "run property suites");
  check->add_option("--suite", suite, "modules|du|scalar|bd|local|kirchheim|all");
  check->add_option("--seed", seed, "instance generator seed");
  check->add_option("--n", n, "instances per suite");
  check->add_option("--out", out, "write the JSON report to this file");
  check->add_option("--replay", replay, "rerun a failure artifact");
  check->add_option("--grid-n", grid_n, "grid nodes per axis for kirchheim");

  CLI11_PARSE(app, argc, argv);
  eps_y_set = epsopt->count() > 0;

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (du->parsed())
      return cmd_du(path, out,
                    eps_y_set ? std::optional<double>(eps_y_val) : std::nullopt);
    if (check->parsed()) return cmd_check(suite, seed, n, out, replay, grid_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
