// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>

#include "ubmc/fem1d.hpp"
#include "ubmc/target.hpp"

namespace ubmc {

/// SIR-X compartmental model with an under-reporting gamma likelihood.
///
/// State (S, I, R, Xi, h) with h' = a S I, started at t = -x3 from one
/// infected individual. Observation i is the model's new infections over day
/// [n - 1 + i, n + i]; y_i = G_i(x) exp(-Gamma_i) with Gamma_i ~ Gamma(theta1, theta2).
class SirxModel final : public DiscretizedTarget {
 public:
  static constexpr double kA = 0.775;
  static constexpr double kB = 0.125;
  static constexpr double kPopulation = 66'650'000.0;
  static constexpr long kObservations = 40;
  static constexpr int kOffset = 29;
  static constexpr double kBlowUpTolerance = 1e-9;

  using State = Eigen::Matrix<double, 5, 1>;

  struct Integration {
    Dvec daily;  // G_1..G_P
    double max_conservation_error = 0.0;
    bool xi_monotone = true;
    long steps = 0;
  };

  SirxModel(Dvec y, const Vec& theta);

  static Vec prior_lower();
  static Vec prior_upper();
  static State vector_field(const State& s, const Vec& x);
  /// RK4 on the grid t = k * Delta_l with one shortened first step from -x3.
  static Integration integrate(int level, const Vec& x);
  /// h at the day boundaries n, n + 1, ..., n + P (for rate diagnostics).
  static Dvec cumulative_at_days(int level, const Vec& x);
  /// y_i = G_i(x) exp(-Gamma_i).
  static Dvec generate_data(const Vec& x, const Vec& theta, int level, RngStream& stream);

  std::string name() const override { return "sirx"; }
  int dim() const override { return 3; }
  const LevelSchedule& schedule() const override { return schedule_; }
  double cost_exponent() const override { return 1.0; }
  const Vec& theta() const override { return theta_; }
  TargetPtr with_theta(const Vec& theta) const override;
  bool in_support(const Vec& x) const override;
  Density evaluate(int level, const Vec& x) const override;
  /// Prior truncated to the level-l set where every G_i exceeds y_i.
  Vec sample_initial(int level, RngStream& stream) const override;
  Vec init_scale() const override;

  const Dvec& data() const { return *y_; }

 private:
  SirxModel(std::shared_ptr<const Dvec> y, const Vec& theta);

  std::shared_ptr<const Dvec> y_;
  LevelSchedule schedule_;
  Vec theta_;
};

}  // namespace ubmc
