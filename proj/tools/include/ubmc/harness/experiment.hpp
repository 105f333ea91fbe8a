// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ubmc/harness/config.hpp"

namespace ubmc::harness {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::string csv;  // replicates.csv contents, header included
  json summary;
  std::vector<Check> checks;
};

/// Runs the experiment named by cfg["experiment"] on a resolved config.
/// Results do not depend on the worker count.
ExperimentResult run_experiment(const json& cfg, unsigned workers);

/// Writes replicates.csv, summary.json and manifest.json under dir.
void write_outputs(const std::filesystem::path& dir, const json& cfg, const ExperimentResult& result);

/// Bit i set iff check i failed (at most 6 checks are encoded).
int check_exit_code(const std::vector<Check>& checks);

}  // namespace ubmc::harness
