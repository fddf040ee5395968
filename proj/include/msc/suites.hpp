#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msc/json_io.hpp"

namespace msc {

struct CheckLine {
  std::string name;
  long count = 0;          // folded assertions
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct SuiteResult {
  std::string suite;
  uint64_t seed = 0;
  int n = 0;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
  std::vector<std::string> csv;      // kirchheim rows
  std::string failure_artifact;      // first failing instance, when any
  bool pass = true;
};

Json suite_to_json(const SuiteResult& r);

/// Core du checks: norm identity, definitional oracle, chain rule,
/// pushforward accounting, defining pairing.
SuiteResult run_du_suite(uint64_t seed, int n, const std::string& artifact_dir = ".");

/// Module-category laws: norm axioms, duals, ext, pullback, induced maps,
/// inverse limits and limit maps.
SuiteResult run_modules_suite(uint64_t seed, int n, const std::string& artifact_dir = ".");

SuiteResult run_scalar_suite(uint64_t seed, int n, const std::string& artifact_dir = ".");

SuiteResult run_bd_suite(uint64_t seed, int n, const std::string& artifact_dir = ".");

SuiteResult run_local_suite(uint64_t seed, int n, const std::string& artifact_dir = ".");

/// Grid consistency with the metric differential; `n_per_axis_3d` tames the
/// cubic grids. CSV rows: entry,h,direction,max_error,empirical_order.
SuiteResult run_kirchheim_suite(int max_dim = 3, int n_per_axis = 17,
                                const std::string& artifact_dir = ".");

/// Reruns the instance encoded in a failure artifact.
SuiteResult replay_artifact(const std::string& path);

}  // namespace msc
