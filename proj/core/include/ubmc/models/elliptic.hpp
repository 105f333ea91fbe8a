// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "ubmc/fem1d.hpp"
#include "ubmc/level_cache.hpp"
#include "ubmc/target.hpp"

namespace ubmc {

/// -(Phi(.; x) h')' = 100 t on [0, 1] with zero boundary values and
/// Phi = 0.15 + x1 sin(pi t) / 10 + x2 cos(2 pi t) / 40, observed pointwise at
/// 0.01, 0.03, ..., 0.99 under a uniform prior on [-1, 1]^2.
class EllipticModel final : public DiscretizedTarget {
 public:
  static constexpr long kObservations = 50;
  static constexpr double kPhiBar = 0.15;
  static constexpr double kTheta1 = 0.1;
  static constexpr double kTheta2 = 0.025;
  static constexpr int kMaxLevel = 21;

  struct LevelData {
    Mesh1d mesh;
    Dvec v1_mid;
    Dvec v2_mid;
    Dvec load;
    Interpolator obs;
  };

  EllipticModel(Dvec y, double theta, int l0 = 3);

  static std::vector<double> observation_points();
  /// Nodal FEM solution at a level.
  static Dvec solve(int level, const Vec& x, int l0 = 3);
  static Dvec observe(int level, const Vec& x, int l0 = 3);
  static Dvec generate_data(const Vec& x, double theta, int level, RngStream& stream);

  std::string name() const override { return "elliptic"; }
  int dim() const override { return 2; }
  const LevelSchedule& schedule() const override { return schedule_; }
  double cost_exponent() const override { return 1.0; }
  const Vec& theta() const override { return theta_; }
  TargetPtr with_theta(const Vec& theta) const override;
  bool in_support(const Vec& x) const override;
  Density evaluate(int level, const Vec& x) const override;
  bool has_gradient() const override { return true; }
  /// Likelihood gradient by one adjoint solve; the flat prior adds nothing.
  Vec grad_log_gamma(int level, const Vec& x) const override;
  Vec sample_initial(int level, RngStream& stream) const override;

  const Dvec& data() const { return shared_->y; }
  const LevelData& level_data(int level) const { return shared_->cache.get(level); }
  /// Nodal solution using the cached level data.
  Dvec solve_cached(int level, const Vec& x) const;

 private:
  struct Shared {
    Dvec y;
    int l0;
    LevelCache<LevelData> cache;

    Shared(Dvec data, int offset);
  };

  EllipticModel(std::shared_ptr<const Shared> shared, double theta);

  std::shared_ptr<const Shared> shared_;
  LevelSchedule schedule_;
  Vec theta_;
};

}  // namespace ubmc
