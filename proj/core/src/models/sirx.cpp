// SPDX-License-Identifier: Apache-2.0
#include "ubmc/models/sirx.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "ubmc/error.hpp"
#include "ubmc/rk4.hpp"

namespace ubmc {

namespace {

void check_theta(const Vec& theta) {
  if (theta.size() != 2) throw Error(ErrorKind::InvalidDimension, "sirx theta is (shape, scale)");
  if (!(theta.array() > 0.0).all() || !theta.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "sirx theta entries must be > 0");
  }
}

void check_state(const SirxModel::State& s) {
  for (int i = 0; i < 5; ++i) {
    if (!(s[i] >= -SirxModel::kBlowUpTolerance && s[i] <= 1.0 + SirxModel::kBlowUpTolerance)) {
      throw Error(ErrorKind::IntegratorBlowUp, "sirx state left [0, 1]^5");
    }
  }
}

// Integrates to the last observed day and hands h at each day boundary
// n - 1 + i (i = 1..P+1, so P + 1 values) to the caller.
template <typename OnDay>
SirxModel::Integration run(int level, const Vec& x, OnDay&& on_day) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  if (x.size() != 3) throw Error(ErrorKind::InvalidDimension, "sirx state is a 3-vector");
  if (level > 40) throw Error(ErrorKind::LevelTooLarge, "sirx step count overflows");
  const long per_day = 10L << level;
  const double dt = 0.1 * std::ldexp(1.0, -level);
  auto f = [&x](double, const SirxModel::State& s) { return SirxModel::vector_field(s, x); };

  SirxModel::State s;
  s << 1.0 - 1.0 / SirxModel::kPopulation, 1.0 / SirxModel::kPopulation, 0.0, 0.0, 0.0;
  SirxModel::Integration out;
  const double t0 = -x[2];
  long k = static_cast<long>(std::ceil(t0 / dt));
  const double first = static_cast<double>(k) * dt - t0;
  auto after_step = [&](const SirxModel::State& prev) {
    check_state(s);
    const double c = std::abs(s[0] + s[1] + s[2] + s[3] - 1.0);
    out.max_conservation_error = std::max(out.max_conservation_error, c);
    if (s[3] < prev[3]) out.xi_monotone = false;
    ++out.steps;
  };
  if (first > 0.0) {
    const SirxModel::State prev = s;
    s = rk4_step(f, t0, s, first);
    after_step(prev);
  }
  const long first_day = SirxModel::kOffset;
  const long last_day = SirxModel::kOffset + SirxModel::kObservations;
  const long k_end = last_day * per_day;
  if (k > first_day * per_day) throw Error(ErrorKind::InvalidArgument, "sirx start lies after the first window");
  if (k == first_day * per_day) on_day(first_day, s);
  while (k < k_end) {
    const SirxModel::State prev = s;
    s = rk4_step(f, static_cast<double>(k) * dt, s, dt);
    ++k;
    after_step(prev);
    if (k % per_day == 0 && k >= first_day * per_day) on_day(k / per_day, s);
  }
  return out;
}

}  // namespace

SirxModel::SirxModel(Dvec y, const Vec& theta) : SirxModel(std::make_shared<const Dvec>(std::move(y)), theta) {}

SirxModel::SirxModel(std::shared_ptr<const Dvec> y, const Vec& theta)
    : y_(std::move(y)), schedule_{0.1, 0}, theta_(theta) {
  check_theta(theta_);
  if (y_->size() != kObservations) throw Error(ErrorKind::InvalidDimension, "sirx data needs 40 values");
  if (!(y_->array() > 0.0).all()) throw Error(ErrorKind::InvalidArgument, "sirx observations must be positive");
}

Vec SirxModel::prior_lower() { return Vec{{0.001, 0.2, 5.0}}; }

Vec SirxModel::prior_upper() { return Vec{{0.003, 0.4, 25.0}}; }

SirxModel::State SirxModel::vector_field(const State& s, const Vec& x) {
  const double si = kA * s[0] * s[1];
  State d;
  d[0] = -si - x[0] * s[0];
  d[1] = si - (kB + x[0] + x[1]) * s[1];
  d[2] = kB * s[1] + x[0] * s[0];
  d[3] = (x[0] + x[1]) * s[1];
  d[4] = si;
  return d;
}

SirxModel::Integration SirxModel::integrate(int level, const Vec& x) {
  Dvec h(kObservations + 1);
  Integration out = run(level, x, [&](long day, const State& s) { h[day - kOffset] = s[4]; });
  out.daily = h.tail(kObservations) - h.head(kObservations);
  return out;
}

Dvec SirxModel::cumulative_at_days(int level, const Vec& x) {
  Dvec h(kObservations + 1);
  run(level, x, [&](long day, const State& s) { h[day - kOffset] = s[4]; });
  return h;
}

Dvec SirxModel::generate_data(const Vec& x, const Vec& theta, int level, RngStream& stream) {
  check_theta(theta);
  const Dvec g = integrate(level, x).daily;
  std::gamma_distribution<double> gamma(theta[0], theta[1]);
  Dvec y(kObservations);
  for (long i = 0; i < kObservations; ++i) y[i] = g[i] * std::exp(-gamma(stream));
  return y;
}

TargetPtr SirxModel::with_theta(const Vec& theta) const {
  return std::shared_ptr<const SirxModel>(new SirxModel(y_, theta));
}

bool SirxModel::in_support(const Vec& x) const {
  if (x.size() != 3 || !x.allFinite()) return false;
  return (x.array() >= prior_lower().array()).all() && (x.array() <= prior_upper().array()).all();
}

Density SirxModel::evaluate(int level, const Vec& x) const {
  Density out;
  if (!in_support(x)) return out;
  const Dvec g = integrate(level, x).daily;
  const double shape = theta_[0];
  const double scale = theta_[1];
  const double log_scale = std::log(scale);
  const double log_norm = -boost::math::lgamma(shape) - shape * log_scale;
  double lg = 0.0;
  double sum_log_z = 0.0;
  double sum_z = 0.0;
  for (long i = 0; i < kObservations; ++i) {
    if (!(g[i] > (*y_)[i])) return out;
    const double z = std::log(g[i] / (*y_)[i]);
    if (!(z > 0.0)) return out;
    const double log_z = std::log(z);
    lg += log_norm + (shape - 1.0) * log_z - z / scale;
    sum_log_z += log_z;
    sum_z += z;
  }
  const Vec width = prior_upper() - prior_lower();
  out.log_gamma = lg - std::log(width.prod());
  const double p = static_cast<double>(kObservations);
  out.score = Vec(2);
  out.score << -p * boost::math::digamma(shape) - p * log_scale + sum_log_z, -p * shape / scale + sum_z / (scale * scale);
  return out;
}

Vec SirxModel::sample_initial(int level, RngStream& stream) const {
  const Vec lo = prior_lower();
  const Vec width = prior_upper() - lo;
  for (long it = 0; it < 1'000'000; ++it) {
    Vec x(3);
    for (int j = 0; j < 3; ++j) x[j] = lo[j] + width[j] * stream.uniform();
    if (evaluate(level, x).in_support()) return x;
  }
  throw Error(ErrorKind::InitializerFailure, "no prior draw landed in the support set within 10^6 tries");
}

Vec SirxModel::init_scale() const { return prior_upper() - prior_lower(); }

}  // namespace ubmc
