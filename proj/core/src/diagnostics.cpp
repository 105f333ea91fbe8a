// SPDX-License-Identifier: Apache-2.0
#include "ubmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ubmc/error.hpp"

namespace ubmc {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "fit_line needs equal-length inputs");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "a rate fit needs at least 3 points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit_line needs distinct x values");
  LineFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.slope_se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  return f;
}

LineFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw Error(ErrorKind::InvalidArgument, "a rate fit needs at least 3 points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [l, v] : points) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "rate fit values must be positive");
    x.push_back(l);
    y.push_back(std::log2(v));
  }
  return fit_line(x, y);
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw Error(ErrorKind::EmptyInput, "quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

MeetingTimeReport meeting_time_report(std::vector<long> taus) {
  if (taus.empty()) throw Error(ErrorKind::EmptyInput, "meeting-time report needs records");
  std::vector<double> t(taus.begin(), taus.end());
  MeetingTimeReport r;
  r.q50 = quantile(t, 0.5);
  r.q90 = quantile(t, 0.9);
  r.q99 = quantile(t, 0.99);
  r.max = *std::max_element(t.begin(), t.end());
  r.mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());

  // survival on a grid of up to 20 points between the minimum and the 0.99 quantile
  std::sort(t.begin(), t.end());
  const double lo = t.front();
  const double hi = r.q99;
  std::vector<double> xs;
  std::vector<double> ys;
  if (hi > lo) {
    const int grid = 20;
    for (int g = 0; g < grid; ++g) {
      const double n = lo + (hi - lo) * g / (grid - 1);
      const auto above = t.end() - std::upper_bound(t.begin(), t.end(), n);
      if (above == 0) continue;
      xs.push_back(n);
      ys.push_back(std::log(static_cast<double>(above) / static_cast<double>(t.size())));
    }
  }
  if (xs.size() >= 3) {
    r.tail = fit_line(xs, ys);
    r.tail_fitted = true;
  }
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_pvalue(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  const double lambda = (s + 0.12 + 0.11 / s) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::pair<double, double> ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error(ErrorKind::EmptyInput, "KS test needs a sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_pvalue(d, n)};
}

std::pair<double, double> ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyInput, "KS test needs two samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_pvalue(d, na * nb / (na + nb))};
}

}  // namespace ubmc
