// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>

#include "ubmc/level_schedule.hpp"
#include "ubmc/rng.hpp"
#include "ubmc/types.hpp"

namespace ubmc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Log of the unnormalized level-l density plus its parameter score, which
/// every built-in model gets as a by-product of the forward solve.
struct Density {
  double log_gamma = kNegInf;
  /// d/dtheta log gamma_theta at this level; empty outside the support.
  Vec score;

  bool in_support() const noexcept { return log_gamma > kNegInf; }
};

/// Accumulates cost in Delta_l^{-omega} units, one unit per density evaluation.
class CostLedger {
 public:
  void charge(double units) noexcept { units_ += units; }
  double units() const noexcept { return units_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }
  void count_evaluation() noexcept { ++evaluations_; }

 private:
  double units_ = 0.0;
  std::uint64_t evaluations_ = 0;
};

/// A level-indexed family of unnormalized log-densities log gamma_l(x).
///
/// Implementations are immutable after construction and safe to share across
/// threads. Log densities are -inf outside the support; that is a value, not
/// an error.
class DiscretizedTarget {
 public:
  virtual ~DiscretizedTarget() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual const LevelSchedule& schedule() const = 0;
  /// One evaluation at level l costs O(Delta_l^{-omega}).
  virtual double cost_exponent() const = 0;
  virtual const Vec& theta() const = 0;
  virtual std::shared_ptr<const DiscretizedTarget> with_theta(const Vec& theta) const = 0;

  /// Level-independent prior support.
  virtual bool in_support(const Vec& x) const = 0;
  virtual Density evaluate(int level, const Vec& x) const = 0;

  virtual bool has_gradient() const { return false; }
  /// Gradient of log gamma_l in x; throws HmcUnsupported unless has_gradient().
  virtual Vec grad_log_gamma(int level, const Vec& x) const;

  /// Draw from the chain initializer (the prior, truncated to the level-l
  /// support where the model requires it).
  virtual Vec sample_initial(int level, RngStream& stream) const = 0;
  /// Per-coordinate scale applied to the cross-level initial perturbation.
  virtual Vec init_scale() const { return Vec::Ones(dim()); }

  double level_cost(int level) const;
};

using TargetPtr = std::shared_ptr<const DiscretizedTarget>;

/// log gamma_l(x), charging the ledger one level-l unit.
double eval_log_gamma(const DiscretizedTarget& target, int level, const Vec& x, CostLedger& ledger);
/// Same as eval_log_gamma but keeps the score.
Density eval_density(const DiscretizedTarget& target, int level, const Vec& x, CostLedger& ledger);

}  // namespace ubmc
