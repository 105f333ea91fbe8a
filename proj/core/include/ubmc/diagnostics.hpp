// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ubmc {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Standard error of the slope; 0 for an exact fit.
  double slope_se = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of y on x; needs >= 3 points with some spread in x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// OLS of log2(value) on level; needs >= 3 points with positive values.
LineFit fit_rate(const std::vector<std::pair<double, double>>& points);

struct MeetingTimeReport {
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  /// Log-linear fit of the empirical survival P(tau > n) against n.
  LineFit tail;
  bool tail_fitted = false;
};

MeetingTimeReport meeting_time_report(std::vector<long> taus);

/// Empirical quantile by linear interpolation between order statistics.
double quantile(std::vector<double> v, double q);

double normal_cdf(double x);

/// Asymptotic Kolmogorov survival function for a statistic and effective size.
double kolmogorov_pvalue(double d, double n_eff);
/// One-sample KS test against a continuous CDF; returns (D, p).
std::pair<double, double> ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Two-sample KS test; returns (D, p).
std::pair<double, double> ks_test_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace ubmc
