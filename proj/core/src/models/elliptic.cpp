// SPDX-License-Identifier: Apache-2.0
#include "ubmc/models/elliptic.hpp"

#include <cmath>
#include <numbers>

#include "ubmc/error.hpp"
#include "ubmc/models/gaussian_likelihood.hpp"

namespace ubmc {

namespace {

EllipticModel::LevelData build_level(int level, int l0) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  if (level > EllipticModel::kMaxLevel) throw Error(ErrorKind::LevelTooLarge, "elliptic mesh too fine");
  EllipticModel::LevelData d;
  d.mesh = Mesh1d{0.0, 1.0, 1L << (level + l0)};
  d.v1_mid.resize(d.mesh.cells);
  d.v2_mid.resize(d.mesh.cells);
  for (long e = 0; e < d.mesh.cells; ++e) {
    const double t = d.mesh.midpoint(e);
    d.v1_mid[e] = std::sin(std::numbers::pi * t);
    d.v2_mid[e] = std::cos(2.0 * std::numbers::pi * t);
  }
  d.load = trapezoid_load(d.mesh, [](double t) { return 100.0 * t; });
  d.obs = Interpolator(d.mesh, EllipticModel::observation_points());
  return d;
}

Dvec coefficient(const EllipticModel::LevelData& d, const Vec& x) {
  if (x.size() != 2) throw Error(ErrorKind::InvalidDimension, "elliptic state is a 2-vector");
  return (EllipticModel::kPhiBar + (x[0] * EllipticModel::kTheta1) * d.v1_mid.array() +
          (x[1] * EllipticModel::kTheta2) * d.v2_mid.array())
      .matrix();
}

void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "elliptic theta must be > 0");
}

}  // namespace

EllipticModel::Shared::Shared(Dvec data, int offset)
    : y(std::move(data)), l0(offset), cache([this](int level) { return build_level(level, l0); }) {}

std::vector<double> EllipticModel::observation_points() {
  std::vector<double> t(kObservations);
  for (long p = 0; p < kObservations; ++p) t[p] = 0.01 + 0.02 * static_cast<double>(p);
  return t;
}

Dvec EllipticModel::solve(int level, const Vec& x, int l0) {
  const LevelData d = build_level(level, l0);
  return fem_solve(d.mesh, coefficient(d, x), d.load);
}

Dvec EllipticModel::observe(int level, const Vec& x, int l0) {
  const LevelData d = build_level(level, l0);
  return d.obs.apply(fem_solve(d.mesh, coefficient(d, x), d.load));
}

Dvec EllipticModel::generate_data(const Vec& x, double theta, int level, RngStream& stream) {
  check_theta(theta);
  Dvec y = observe(level, x);
  const double sd = 1.0 / std::sqrt(theta);
  for (long p = 0; p < kObservations; ++p) y[p] += sd * stream.normal();
  return y;
}

EllipticModel::EllipticModel(Dvec y, double theta, int l0)
    : EllipticModel(std::make_shared<const Shared>(std::move(y), l0), theta) {
  if (shared_->y.size() != kObservations) throw Error(ErrorKind::InvalidDimension, "elliptic data needs 50 values");
}

EllipticModel::EllipticModel(std::shared_ptr<const Shared> shared, double theta)
    : shared_(std::move(shared)), schedule_{1.0, shared_->l0}, theta_(Vec::Constant(1, theta)) {
  check_theta(theta);
}

TargetPtr EllipticModel::with_theta(const Vec& theta) const {
  if (theta.size() != 1) throw Error(ErrorKind::InvalidDimension, "elliptic theta is a scalar");
  return std::shared_ptr<const EllipticModel>(new EllipticModel(shared_, theta[0]));
}

bool EllipticModel::in_support(const Vec& x) const {
  return x.size() == 2 && x.allFinite() && x.cwiseAbs().maxCoeff() <= 1.0;
}

Dvec EllipticModel::solve_cached(int level, const Vec& x) const {
  const LevelData& d = level_data(level);
  return fem_solve(d.mesh, coefficient(d, x), d.load);
}

Density EllipticModel::evaluate(int level, const Vec& x) const {
  Density out;
  if (!in_support(x)) return out;
  const LevelData& d = level_data(level);
  const Dvec h = fem_solve(d.mesh, coefficient(d, x), d.load);
  const double sq = (shared_->y - d.obs.apply(h)).squaredNorm();
  const double theta = theta_[0];
  out.log_gamma = detail::gaussian_log_likelihood(sq, theta, kObservations) - std::log(4.0);
  out.score = Vec::Constant(1, detail::gaussian_score(sq, theta, kObservations));
  return out;
}

Vec EllipticModel::grad_log_gamma(int level, const Vec& x) const {
  const LevelData& d = level_data(level);
  const Dvec phi = coefficient(d, x);
  Dvec diag;
  Dvec off;
  assemble_stiffness(d.mesh, phi, diag, off);
  const long n = d.mesh.cells - 1;
  Dvec h = Dvec::Zero(d.mesh.cells + 1);
  h.segment(1, n) = solve_tridiagonal(diag, off, d.load);
  // adjoint: A lambda = O^T r
  Dvec rhs = Dvec::Zero(d.mesh.cells + 1);
  for (std::size_t p = 0; p < d.obs.size(); ++p) {
    d.obs.scatter(p, shared_->y[static_cast<Eigen::Index>(p)] - d.obs.apply(h, p), rhs);
  }
  Dvec lambda = Dvec::Zero(d.mesh.cells + 1);
  lambda.segment(1, n) = solve_tridiagonal(diag, off, rhs.segment(1, n));
  // lambda^T (dA/dx_j) h, element by element
  const double inv_h = 1.0 / d.mesh.width();
  double s1 = 0.0;
  double s2 = 0.0;
  for (long e = 0; e < d.mesh.cells; ++e) {
    const double prod = (lambda[e + 1] - lambda[e]) * (h[e + 1] - h[e]) * inv_h;
    s1 += d.v1_mid[e] * prod;
    s2 += d.v2_mid[e] * prod;
  }
  const double theta = theta_[0];
  Vec g(2);
  g << -theta * kTheta1 * s1, -theta * kTheta2 * s2;
  return g;
}

Vec EllipticModel::sample_initial(int, RngStream& stream) const {
  Vec x(2);
  x << 2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0;
  return x;
}

}  // namespace ubmc
