// SPDX-License-Identifier: Apache-2.0
#include "ubmc/sgd.hpp"

#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

void SgdConfig::validate() const {
  if (theta0.size() < 1) throw Error(ErrorKind::InvalidDimension, "sgd needs a starting parameter");
  if (!(alpha1 > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha1 must be > 0");
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterations must be >= 1");
  if (replicates_per_step < 1) throw Error(ErrorKind::InvalidArgument, "replicates_per_step must be >= 1");
  if (!log_mask.empty() && static_cast<Eigen::Index>(log_mask.size()) != theta0.size()) {
    throw Error(ErrorKind::InvalidDimension, "log mask length differs from theta");
  }
  for (int j = 0; j < theta0.size(); ++j) {
    if (logged(j) && !(theta0[j] > 0.0)) throw Error(ErrorKind::InvalidArgument, "log-space coordinates must start > 0");
    if (map && !logged(j)) throw Error(ErrorKind::Config, "the MAP prior is defined on log theta only");
  }
}

std::vector<SgdStep> sgd_run(const SgdConfig& config, const ScoreEstimator& score) {
  config.validate();
  std::vector<SgdStep> trace;
  trace.reserve(static_cast<std::size_t>(config.iterations) + 1);
  SgdStep start;
  start.theta = config.theta0;
  start.gradient = Vec::Zero(config.theta0.size());
  trace.push_back(start);
  Vec theta = config.theta0;
  double cumulative = 0.0;
  for (long i = 1; i <= config.iterations; ++i) {
    ScoreDraw g = score(theta, i);
    if (g.gradient.size() != theta.size() || !g.gradient.allFinite()) {
      throw Error(ErrorKind::NonFiniteGradient,
                  "score estimate not finite at iteration " + std::to_string(i) + ": " + g.context);
    }
    const double alpha = config.alpha1 / static_cast<double>(i);
    for (int j = 0; j < theta.size(); ++j) {
      if (config.logged(j)) {
        double s = std::log(theta[j]);
        double d = theta[j] * g.gradient[j];
        if (config.map) d -= s;
        s += alpha * d;
        theta[j] = std::exp(s);
      } else {
        theta[j] += alpha * g.gradient[j];
      }
    }
    cumulative += g.cost_units;
    trace.push_back({i, theta, g.gradient, g.cost_units, cumulative});
  }
  return trace;
}

ScoreEstimator make_unbiased_score(TargetPtr base, KernelConfig kernel, LevelDistribution dist,
                                   EstimatorConfig estimator, EstimatorKind kind, std::uint64_t root_seed,
                                   std::uint64_t seed_base, int replicates_per_step) {
  if (replicates_per_step < 1) throw Error(ErrorKind::InvalidArgument, "replicates_per_step must be >= 1");
  if (kind == EstimatorKind::FixedLevel) throw Error(ErrorKind::Config, "a fixed-level estimate is biased");
  return [=](const Vec& theta, long iteration) {
    const CoupledKernel k(base->with_theta(theta), kernel);
    const Observable phi = score_observable();
    ScoreDraw out;
    out.gradient = Vec::Zero(theta.size());
    for (int r = 0; r < replicates_per_step; ++r) {
      const ReplicateSeed seed{root_seed, seed_base + static_cast<std::uint64_t>(iteration) *
                                                          static_cast<std::uint64_t>(replicates_per_step) +
                                              static_cast<std::uint64_t>(r)};
      const UnbiasedEstimate e = kind == EstimatorKind::SingleTerm ? single_term(k, phi, dist, estimator, seed)
                                                                   : independent_sum(k, phi, dist, estimator, seed);
      out.gradient += e.value / static_cast<double>(replicates_per_step);
      out.cost_units += e.cost_units;
      if (!e.value.allFinite()) {
        const auto& run = e.runs.back();
        out.context = "level " + std::to_string(e.level) + ", tau_l " + std::to_string(run.tau_l) + ", tau_lm1 " +
                      std::to_string(run.tau_lm1);
      }
    }
    return out;
  };
}

}  // namespace ubmc
