// SPDX-License-Identifier: Apache-2.0
#include "ubmc/models/toy.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "ubmc/error.hpp"
#include "ubmc/models/gaussian_likelihood.hpp"

namespace ubmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "toy theta must be > 0");
}

}  // namespace

Eigen::Vector2d to_vec2(const Vec& x) {
  if (x.size() != 2) throw Error(ErrorKind::InvalidDimension, "expected a 2-vector");
  return {x[0], x[1]};
}

struct ToyModel::Shared {
  Dvec y;
  int l0;
  double yty;
  ForwardMatrix g_exact;
  LevelCache<LevelData> cache;

  Shared(Dvec data, int offset)
      : y(std::move(data)),
        l0(offset),
        yty(y.squaredNorm()),
        g_exact(exact_forward()),
        cache([this](int level) {
          if (level > kMaxLevel) throw Error(ErrorKind::LevelTooLarge, "toy mesh too fine at this level");
          LevelData d;
          d.g = level_forward(level, l0);
          d.gtg = d.g.transpose() * d.g;
          d.gty = d.g.transpose() * y;
          return d;
        }) {}
};

std::vector<double> ToyModel::observation_times() {
  std::vector<double> t(kObservations);
  for (long p = 1; p <= kObservations; ++p) {
    t[p - 1] = kTwoPi * static_cast<double>(2 * p - 1) / static_cast<double>(2 * kObservations);
  }
  return t;
}

ToyModel::ForwardMatrix ToyModel::exact_forward() {
  const auto t = observation_times();
  ForwardMatrix g(kObservations, 2);
  for (long p = 0; p < kObservations; ++p) {
    g(p, 0) = 0.25 * std::sin(2.0 * t[p]);
    g(p, 1) = std::sin(t[p]);
  }
  return g;
}

ToyModel::ForwardMatrix ToyModel::level_forward(int level, int l0) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  if (level + l0 > kMaxLevel + 5) throw Error(ErrorKind::LevelTooLarge, "toy mesh too fine at this level");
  const Mesh1d mesh{0.0, kTwoPi, 1L << (level + l0)};
  const Dvec ones = Dvec::Ones(mesh.cells);
  const Interpolator obs(mesh, observation_times());
  ForwardMatrix g(kObservations, 2);
  const Dvec h1 = fem_solve(mesh, ones, trapezoid_load(mesh, [](double t) { return std::sin(2.0 * t); }));
  const Dvec h2 = fem_solve(mesh, ones, trapezoid_load(mesh, [](double t) { return std::sin(t); }));
  g.col(0) = obs.apply(h1);
  g.col(1) = obs.apply(h2);
  return g;
}

Dvec ToyModel::generate_data(const Eigen::Vector2d& x, double theta, std::optional<int> level, RngStream& stream) {
  check_theta(theta);
  const ForwardMatrix g = level ? level_forward(*level) : exact_forward();
  Dvec y = g * x;
  const double sd = 1.0 / std::sqrt(theta);
  for (long p = 0; p < kObservations; ++p) y[p] += sd * stream.normal();
  return y;
}

ToyModel::ToyModel(Dvec y, double theta, int l0) : ToyModel(std::make_shared<const Shared>(std::move(y), l0), theta) {
  if (shared_->y.size() != kObservations) throw Error(ErrorKind::InvalidDimension, "toy data needs 50 values");
}

ToyModel::ToyModel(std::shared_ptr<const Shared> shared, double theta)
    : shared_(std::move(shared)), y_(&shared_->y), schedule_{kTwoPi, shared_->l0}, theta_(Vec::Constant(1, theta)) {
  check_theta(theta);
}

TargetPtr ToyModel::with_theta(const Vec& theta) const {
  if (theta.size() != 1) throw Error(ErrorKind::InvalidDimension, "toy theta is a scalar");
  return std::shared_ptr<const ToyModel>(new ToyModel(shared_, theta[0]));
}

const ToyModel::LevelData& ToyModel::level_data(int level) const { return shared_->cache.get(level); }

Density ToyModel::evaluate(int level, const Vec& x) const {
  const LevelData& d = level_data(level);
  const Eigen::Vector2d v = to_vec2(x);
  const double sq = shared_->yty - 2.0 * d.gty.dot(v) + v.dot(d.gtg * v);
  const double theta = theta_[0];
  Density out;
  out.log_gamma = detail::gaussian_log_likelihood(sq, theta, kObservations) - std::log(kTwoPi * kPriorVariance) -
                  v.squaredNorm() / (2.0 * kPriorVariance);
  out.score = Vec::Constant(1, detail::gaussian_score(sq, theta, kObservations));
  return out;
}

Vec ToyModel::grad_log_gamma(int level, const Vec& x) const {
  const LevelData& d = level_data(level);
  const Eigen::Vector2d v = to_vec2(x);
  const Eigen::Vector2d g = theta_[0] * (d.gty - d.gtg * v) - v / kPriorVariance;
  return Vec(g);
}

Vec ToyModel::sample_initial(int, RngStream& stream) const {
  return std::sqrt(kPriorVariance) * sample_std_normal_vec(stream, 2);
}

ToyModel::Moments ToyModel::posterior(std::optional<int> level) const {
  Eigen::Matrix2d gtg;
  Eigen::Vector2d gty;
  if (level) {
    gtg = level_data(*level).gtg;
    gty = level_data(*level).gty;
  } else {
    gtg = shared_->g_exact.transpose() * shared_->g_exact;
    gty = shared_->g_exact.transpose() * shared_->y;
  }
  const double theta = theta_[0];
  const Eigen::Matrix2d prec = theta * gtg + Eigen::Matrix2d::Identity() / kPriorVariance;
  Eigen::LLT<Eigen::Matrix2d> llt(prec);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::InvalidArgument, "posterior precision is singular");
  Moments m;
  m.cov = llt.solve(Eigen::Matrix2d::Identity());
  m.mean = theta * m.cov * gty;
  return m;
}

double ToyModel::log_marginal_likelihood(double theta) const {
  check_theta(theta);
  const ForwardMatrix& g = shared_->g_exact;
  const Eigen::MatrixXd c = kPriorVariance * g * g.transpose() +
                            Eigen::MatrixXd::Identity(kObservations, kObservations) / theta;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  const Eigen::MatrixXd l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const Dvec z = llt.matrixL().solve(shared_->y);
  return -0.5 * static_cast<double>(kObservations) * std::log(kTwoPi) - 0.5 * log_det - 0.5 * z.squaredNorm();
}

double ToyModel::exact_score(double theta) const {
  check_theta(theta);
  const ForwardMatrix& g = shared_->g_exact;
  const Eigen::MatrixXd c = kPriorVariance * g * g.transpose() +
                            Eigen::MatrixXd::Identity(kObservations, kObservations) / theta;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  const Eigen::MatrixXd cinv = llt.solve(Eigen::MatrixXd::Identity(kObservations, kObservations));
  const Dvec a = cinv * shared_->y;
  return 0.5 / (theta * theta) * (cinv.trace() - a.squaredNorm());
}

double ToyModel::mle() const {
  // score in log theta: theta * dlogZ/dtheta, decreasing through zero at the MLE
  auto f = [this](double s) { return std::exp(s) * exact_score(std::exp(s)); };
  double lo = -10.0;
  double hi = 10.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) throw Error(ErrorKind::InvalidArgument, "toy MLE not bracketed");
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return std::exp(0.5 * (r.first + r.second));
}

}  // namespace ubmc
