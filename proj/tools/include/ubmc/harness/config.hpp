// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ubmc/estimator.hpp"
#include "ubmc/fem1d.hpp"
#include "ubmc/level_schedule.hpp"
#include "ubmc/sgd.hpp"

namespace ubmc::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Per-model defaults; user configs are merge-patched on top.
json default_config(const std::string& model);

/// Defaults + user document, with every referenced setting validated.
json resolve_config(const json& user);

/// Observations for the configured model: read from data.file or generated from data.{seed,level,x,theta}.
Dvec load_or_generate_data(const json& cfg);

TargetPtr build_target(const json& cfg);
KernelConfig build_kernel(const json& cfg, int dim);
EstimatorConfig build_estimator(const json& cfg);
LevelDistribution build_level_distribution(const json& cfg);
Observable build_observable(const json& cfg);
EstimatorKind build_estimator_kind(const json& cfg);
SgdConfig build_sgd(const json& cfg);

Vec json_to_vec(const json& j);
json vec_to_json(const Vec& v);

/// Observations as CSV with header "index,y".
Dvec read_observations_csv(const std::filesystem::path& path);
std::string observations_csv(const Dvec& y);

/// Fixed-precision number formatting shared by every CSV writer.
std::string fmt_num(double v);

}  // namespace ubmc::harness
