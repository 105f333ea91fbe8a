// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ubmc/coupled_kernel.hpp"
#include "ubmc/level_schedule.hpp"

namespace ubmc {

/// Vector of test functions phi evaluated at a chain point on a given level.
using Observable = std::function<Vec(int level, const ChainPoint&)>;

/// phi(x) = x.
Observable identity_observable();
/// phi(x) = d/dtheta log gamma_l(x).
Observable score_observable();
/// (x, score) stacked.
Observable identity_and_score_observable();

struct EstimatorConfig {
  long k = 100;
  long m = 1000;
  long n_max = 100'000;
  bool keep_trajectories = false;

  void validate() const;
};

/// Stored states of one coupled pair, indexed by time n = 0..stop_time.
struct PairTrajectory {
  std::vector<ChainPoint> x;
  std::vector<ChainPoint> w;
};

struct RunRecord {
  int level = 0;
  long tau_l = 0;
  /// Absent (-1) for single-level runs.
  long tau_lm1 = -1;
  long stop_time = 0;
  double cost_units = 0.0;
  /// pi_0 estimate for level 0, the increment xi_l otherwise.
  Vec value;
  std::optional<PairTrajectory> upper;
  std::optional<PairTrajectory> lower;

  long tau_check() const { return tau_lm1 < 0 ? tau_l : std::max(tau_l, tau_lm1); }
};

/// Time-averaged estimate from a stored trajectory; tau is the pair's meeting time.
Vec estimate_fixed_level(const Observable& phi, int level, const PairTrajectory& t, long tau, long k, long m);
Vec estimate_increment(const Observable& phi, const RunRecord& rec, long k, long m);

/// Coupled pair at `level` run to n >= max(m, tau).
RunRecord run_pair(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                   RngStream& init, RngStream& chain);
/// Four coupled chains on (level, level - 1) run to n >= max(m, tau_l, tau_lm1).
RunRecord run_quad(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                   RngStream& init, RngStream& chain);
/// run_pair at level 0, run_quad above.
RunRecord run_level(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                    RngStream& init, RngStream& chain);

enum class EstimatorKind { SingleTerm, IndependentSum, FixedLevel };

EstimatorKind parse_estimator_kind(const std::string& s);
std::string to_string(EstimatorKind kind);

struct LevelRun {
  int level = 0;
  long tau_l = 0;
  long tau_lm1 = -1;
  long stop_time = 0;
  double cost_units = 0.0;
  /// 1 / P_L(L) for single-term, 1 / survival(l) for independent-sum.
  double weight = 1.0;
};

struct UnbiasedEstimate {
  EstimatorKind kind = EstimatorKind::SingleTerm;
  std::uint64_t replicate_id = 0;
  Vec value;
  /// Sampled level L.
  int level = 0;
  double cost_units = 0.0;
  std::vector<LevelRun> runs;
};

/// Seeds for one replicate; each estimator derives level, init and chain streams.
struct ReplicateSeed {
  std::uint64_t root_seed = 0;
  std::uint64_t replicate_id = 0;
};

/// xi_L / P_L(L) with L ~ P_L.
UnbiasedEstimate single_term(const CoupledKernel& kernel, const Observable& phi, const LevelDistribution& dist,
                             const EstimatorConfig& cfg, ReplicateSeed seed);
/// pi_0 estimate + sum_{l=1}^L xi_l / P(L >= l) with independent runs per level.
UnbiasedEstimate independent_sum(const CoupledKernel& kernel, const Observable& phi, const LevelDistribution& dist,
                                 const EstimatorConfig& cfg, ReplicateSeed seed);
/// Increment (or pi_0 estimate) at a fixed level, unweighted.
UnbiasedEstimate fixed_level(const CoupledKernel& kernel, const Observable& phi, int level,
                             const EstimatorConfig& cfg, ReplicateSeed seed);

struct ReplicateSummary {
  Vec mean;
  /// Absent for a single replicate.
  std::optional<Vec> std_error;
  double total_cost = 0.0;
  std::size_t count = 0;
};

ReplicateSummary average_replicates(const std::vector<UnbiasedEstimate>& estimates);
ReplicateSummary average_values(const std::vector<Vec>& values);

}  // namespace ubmc
