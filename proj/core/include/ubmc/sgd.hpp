// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ubmc/estimator.hpp"

namespace ubmc {

struct SgdConfig {
  Vec theta0;
  double alpha1 = 0.03;
  long iterations = 1000;
  int replicates_per_step = 1;
  /// Coordinates updated as log theta; empty means all.
  std::vector<bool> log_mask;
  /// Adds a standard normal prior on log theta (log-masked coordinates only).
  bool map = false;

  void validate() const;
  bool logged(int j) const { return log_mask.empty() || log_mask[static_cast<std::size_t>(j)]; }
};

struct ScoreDraw {
  Vec gradient;
  double cost_units = 0.0;
  /// Shown if the gradient is not finite.
  std::string context;
};

/// Returns an unbiased estimate of the score at theta for the given iteration.
using ScoreEstimator = std::function<ScoreDraw(const Vec& theta, long iteration)>;

struct SgdStep {
  long iteration = 0;
  Vec theta;
  Vec gradient;
  double cost_units = 0.0;
  double cumulative_cost = 0.0;
};

/// theta_i = theta_{i-1} + (alpha1 / i) * g, in log space for masked
/// coordinates. Entry 0 of the trace is theta0.
std::vector<SgdStep> sgd_run(const SgdConfig& config, const ScoreEstimator& score);

/// Unbiased score of log Z(theta) from averaged single-term or
/// independent-sum replicates. Replicate ids are
/// seed_base + iteration * replicates_per_step + r.
ScoreEstimator make_unbiased_score(TargetPtr base, KernelConfig kernel, LevelDistribution dist,
                                   EstimatorConfig estimator, EstimatorKind kind, std::uint64_t root_seed,
                                   std::uint64_t seed_base, int replicates_per_step);

}  // namespace ubmc
