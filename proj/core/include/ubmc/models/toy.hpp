// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "ubmc/fem1d.hpp"
#include "ubmc/level_cache.hpp"
#include "ubmc/target.hpp"

namespace ubmc {

/// Linear-Gaussian inverse problem on [0, 2pi]: -h'' = x1 sin 2t + x2 sin t with
/// zero boundary values, observed at 50 points with precision theta under a
/// N(0, 16 I) prior. Level l solves the PDE by P1 finite elements.
class ToyModel final : public DiscretizedTarget {
 public:
  static constexpr long kObservations = 50;
  static constexpr double kPriorVariance = 16.0;
  /// Largest level with an affordable mesh (2^24 cells).
  static constexpr int kMaxLevel = 19;

  using ForwardMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  struct LevelData {
    ForwardMatrix g;
    Eigen::Matrix2d gtg;
    Eigen::Vector2d gty;
  };

  struct Moments {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
  };

  ToyModel(Dvec y, double theta, int l0 = 5);

  static std::vector<double> observation_times();
  /// Closed-form forward matrix: G_{p1} = sin(2 t_p) / 4, G_{p2} = sin(t_p).
  static ForwardMatrix exact_forward();
  /// FEM forward matrix at a level.
  static ForwardMatrix level_forward(int level, int l0 = 5);
  /// y = G x + theta^{-1/2} noise, with G exact when level is absent.
  static Dvec generate_data(const Eigen::Vector2d& x, double theta, std::optional<int> level, RngStream& stream);

  std::string name() const override { return "toy"; }
  int dim() const override { return 2; }
  const LevelSchedule& schedule() const override { return schedule_; }
  double cost_exponent() const override { return 1.0; }
  const Vec& theta() const override { return theta_; }
  TargetPtr with_theta(const Vec& theta) const override;
  bool in_support(const Vec& x) const override { return x.allFinite(); }
  Density evaluate(int level, const Vec& x) const override;
  bool has_gradient() const override { return true; }
  Vec grad_log_gamma(int level, const Vec& x) const override;
  Vec sample_initial(int level, RngStream& stream) const override;

  const Dvec& data() const { return *y_; }
  const LevelData& level_data(int level) const;
  /// Posterior at a level, or of the exact model when level is absent.
  Moments posterior(std::optional<int> level = std::nullopt) const;
  /// log Z(theta) = log N_P(y; 0, 16 G G^T + theta^{-1} I) for the exact model.
  double log_marginal_likelihood(double theta) const;
  double exact_score(double theta) const;
  /// Root of exact_score, found by bracketing in log theta.
  double mle() const;

 private:
  struct Shared;

  ToyModel(std::shared_ptr<const Shared> shared, double theta);

  std::shared_ptr<const Shared> shared_;
  const Dvec* y_;
  LevelSchedule schedule_;
  Vec theta_;
};

Eigen::Vector2d to_vec2(const Vec& x);

}  // namespace ubmc
