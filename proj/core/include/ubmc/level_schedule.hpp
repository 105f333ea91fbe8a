// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ubmc/rng.hpp"

namespace ubmc {

/// Mesh width / stepsize ladder: delta(l) = base * 2^-(l + l0).
struct LevelSchedule {
  double base = 1.0;
  int l0 = 0;

  double delta(int l) const;
};

/// Geometric level law P_L(l) = (1 - r) r^l with r = 2^-eta.
///
/// Sampling past `cap` is a hard error: silently truncating the law would
/// bias every estimator built on it.
class LevelDistribution {
 public:
  explicit LevelDistribution(double eta, int cap = 30);

  double eta() const noexcept { return eta_; }
  double ratio() const noexcept { return ratio_; }
  int cap() const noexcept { return cap_; }

  double mass(int l) const;
  /// P(L >= l) = r^l.
  double survival(int l) const;
  /// Probability that a draw lands beyond the cap, 2^{-eta (cap + 1)}.
  double cap_event_probability() const;

  int sample(RngStream& stream) const;
  /// Inverse CDF L = floor(log u / log r) for u in (0, 1]; exposed so tests can pin u.
  int level_for_uniform(double u) const;

 private:
  double eta_;
  double ratio_;
  double log_ratio_;
  int cap_;
};

}  // namespace ubmc
