// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ubmc/error.hpp"
#include "ubmc/diagnostics.hpp"
#include "ubmc/fem1d.hpp"
#include "ubmc/rk4.hpp"

namespace ubmc {
namespace {

using testing::rel_err;
using testing::vec2;
using testing::vec3;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Central difference of f at h.
template <typename F>
double central(F&& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

TEST(Fem, UnitLoadIsNodallyExact) {
  const Mesh1d mesh{0.0, 1.0, 8};
  const Dvec h = fem_solve(mesh, Dvec::Ones(8), trapezoid_load(mesh, [](double) { return 1.0; }));
  ASSERT_EQ(h.size(), 9);
  for (long i = 0; i <= 8; ++i) {
    const double t = mesh.node(i);
    EXPECT_NEAR(h[i], 0.5 * t * (1.0 - t), 1e-14);
  }
}

TEST(Fem, StiffnessDiagonal) {
  const Mesh1d mesh{0.0, 1.0, 16};
  Dvec diag, off;
  assemble_stiffness(mesh, Dvec::Ones(16), diag, off);
  ASSERT_EQ(diag.size(), 15);
  ASSERT_EQ(off.size(), 14);
  for (long i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(diag[i], 2.0 / mesh.width());
  for (long i = 0; i < 14; ++i) EXPECT_DOUBLE_EQ(off[i], -1.0 / mesh.width());
}

TEST(Fem, SineLoadMatchesDiscreteFactor) {
  const Mesh1d mesh{0.0, kTwoPi, 32};
  for (int k : {1, 2}) {
    const double factor = k == 1 ? oracle::kFemFactorK1 : oracle::kFemFactorK2;
    const Dvec h = fem_solve(mesh, Dvec::Ones(32), trapezoid_load(mesh, [k](double t) { return std::sin(k * t); }));
    for (long i = 0; i <= 32; ++i) {
      EXPECT_NEAR(h[i], factor * std::sin(k * mesh.node(i)) / (k * k), 1e-12);
    }
  }
}

TEST(Fem, TridiagonalRejectsIndefinite) {
  Dvec diag(2), off(1), rhs(2);
  diag << 1.0, 1.0;
  off << 2.0;
  rhs << 1.0, 1.0;
  try {
    solve_tridiagonal(diag, off, rhs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LostCoercivity);
  }
}

TEST(Fem, InterpolatorIsLinearInNodes) {
  const Mesh1d mesh{0.0, 1.0, 4};
  const Interpolator obs(mesh, {0.0, 0.1, 0.5, 1.0});
  Dvec nodal(5);
  nodal << 0, 1, 2, 3, 4;
  const Dvec v = obs.apply(nodal);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 0.4);
  EXPECT_DOUBLE_EQ(v[2], 2.0);
  EXPECT_DOUBLE_EQ(v[3], 4.0);
  EXPECT_THROW(Interpolator(mesh, {1.5}), Error);
}

TEST(Toy, ExactForwardEntries) {
  const auto g = ToyModel::exact_forward();
  const double t1 = kTwoPi / 100.0;
  EXPECT_DOUBLE_EQ(g(0, 0), 0.25 * std::sin(2.0 * t1));
  EXPECT_DOUBLE_EQ(g(0, 1), std::sin(t1));
  EXPECT_EQ(g.rows(), 50);
}

TEST(Toy, ForwardErrorIsSecondOrder) {
  const auto g = ToyModel::exact_forward();
  std::vector<std::pair<double, double>> pts;
  for (int l = 1; l <= 8; ++l) pts.emplace_back(l, (ToyModel::level_forward(l) - g).norm());
  EXPECT_NEAR(fit_rate(pts).slope, -2.0, 0.1);
}

TEST(Toy, PosteriorIsStationaryPointOfLogGamma) {
  auto toy = testing::toy_model();
  for (int l : {0, 3}) {
    const auto post = toy->posterior(l);
    const Vec g = toy->grad_log_gamma(l, Vec(post.mean));
    EXPECT_LT(g.norm(), 1e-9);
    // Hessian of log gamma is -cov^{-1}
    const Eigen::Matrix2d prec = post.cov.inverse();
    for (int i = 0; i < 2; ++i) {
      Vec e = Vec::Zero(2);
      e[i] = 1.0;
      const Vec mean(post.mean);
      const Vec gi = (toy->grad_log_gamma(l, mean + 1e-4 * e) - toy->grad_log_gamma(l, mean - 1e-4 * e)) / 2e-4;
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(gi[j], -prec(j, i), 1e-6 * prec.norm());
    }
  }
}

TEST(Toy, VanishingPrecisionGivesThePrior) {
  auto toy = testing::toy_model(1e-12);
  const auto post = toy->posterior();
  EXPECT_LT(post.mean.norm(), 1e-8);
  EXPECT_NEAR(post.cov(0, 0), ToyModel::kPriorVariance, 1e-6);
  EXPECT_NEAR(post.cov(1, 1), ToyModel::kPriorVariance, 1e-6);
  EXPECT_NEAR(post.cov(0, 1), 0.0, 1e-6);
}

TEST(Toy, ExactScoreIsDerivativeOfMarginal) {
  auto toy = testing::toy_model();
  for (double theta : {0.3, 1.0, 2.5}) {
    const double fd = central([&](double h) { return toy->log_marginal_likelihood(theta + h); }, 1e-5);
    EXPECT_LT(rel_err(fd, toy->exact_score(theta)), 1e-6);
  }
  const double mle = toy->mle();
  EXPECT_LT(std::abs(toy->exact_score(mle)), 1e-8);
  EXPECT_GT(mle, 0.5);
  EXPECT_LT(mle, 2.0);
}

TEST(Toy, MarginalLikelihoodIntegratesPosterior) {
  // log Z = log gamma(x) - log N(x; mean, cov) for any x, with exact forward map
  auto toy = testing::toy_model();
  const double theta = 1.0;
  const auto post = toy->posterior();
  // the exact posterior is approached by the level posteriors; compare at a deep level
  const int l = 12;
  const auto pl = toy->posterior(l);
  const Vec x(pl.mean);
  const double log_norm_at_mean = -std::log(kTwoPi) - 0.5 * std::log(pl.cov.determinant());
  const double log_z_l = toy->evaluate(l, x).log_gamma - log_norm_at_mean;
  EXPECT_NEAR(log_z_l, toy->log_marginal_likelihood(theta), 1e-4);
  EXPECT_LT((post.mean - pl.mean).norm(), 1e-5);
}

TEST(Elliptic, ConstantCoefficientIsNodallyExact) {
  const Vec zero = Vec::Zero(2);
  for (int l : {0, 3}) {
    const Dvec h = EllipticModel::solve(l, zero);
    const long cells = h.size() - 1;
    for (long i = 0; i <= cells; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(cells);
      EXPECT_NEAR(h[i], oracle::elliptic_exact_at_zero(t), 1e-10);
    }
  }
}

TEST(Elliptic, StiffnessIsSpdOnTheBox) {
  auto model = testing::elliptic_model();
  const auto& d = model->level_data(2);
  RngStream s = derive_stream({11, 0, StreamTag::Init});
  for (int r = 0; r < 100; ++r) {
    const Vec x = model->sample_initial(2, s);
    const Dvec phi = (EllipticModel::kPhiBar + x[0] * EllipticModel::kTheta1 * d.v1_mid.array() +
                      x[1] * EllipticModel::kTheta2 * d.v2_mid.array())
                         .matrix();
    ASSERT_GT(phi.minCoeff(), 0.0);
    Dvec diag, off;
    assemble_stiffness(d.mesh, phi, diag, off);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(diag.size(), diag.size());
    a.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < diag.size(); ++i) a(i, i + 1) = a(i + 1, i) = off[i];
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(a).info(), Eigen::Success);
  }
}

TEST(Elliptic, ObservationErrorQuartersPerLevel) {
  const Vec x = vec2(0.5, -0.5);
  const Dvec ref = EllipticModel::observe(14, x);
  double prev = (EllipticModel::observe(1, x) - ref).norm();
  for (int l = 2; l <= 6; ++l) {
    const double err = (EllipticModel::observe(l, x) - ref).norm();
    EXPECT_NEAR(prev / err, 4.0, 0.6) << "level " << l;
    prev = err;
  }
}

TEST(Elliptic, OutsideTheBoxHasNoDensity) {
  auto model = testing::elliptic_model();
  EXPECT_FALSE(model->evaluate(2, vec2(1.01, 0.0)).in_support());
  EXPECT_TRUE(model->evaluate(2, vec2(1.0, -1.0)).in_support());
  EXPECT_TRUE(model->evaluate(2, vec2(0.0, 0.0)).score.size() == 1);
}

TEST(Elliptic, DataSizeIsChecked) {
  EXPECT_THROW(EllipticModel(Dvec::Zero(3), 1.0), Error);
  EXPECT_THROW(EllipticModel(Dvec::Zero(50), 0.0), Error);
}

// Score and gradient against central differences at 100 points per model.

TEST(FiniteDifference, ToyScoreAndGradient) {
  auto toy = testing::toy_model(1.3);
  RngStream s = derive_stream({12, 0, StreamTag::Init});
  for (int r = 0; r < 100; ++r) {
    const int l = r % 5;
    const Vec x = vec2(2.0, -2.0) + sample_std_normal_vec(s, 2);
    const double fd = central(
        [&](double h) { return toy->with_theta(Vec::Constant(1, 1.3 + h))->evaluate(l, x).log_gamma; }, 1e-5);
    EXPECT_LT(rel_err(fd, toy->evaluate(l, x).score[0]), 1e-5);
    const Vec g = toy->grad_log_gamma(l, x);
    for (int j = 0; j < 2; ++j) {
      Vec e = Vec::Zero(2);
      e[j] = 1.0;
      const double gd = central([&](double h) { return toy->evaluate(l, x + h * e).log_gamma; }, 1e-5);
      EXPECT_LT(rel_err(gd, g[j]), 1e-5);
    }
  }
}

TEST(FiniteDifference, EllipticScoreAndGradient) {
  auto model = testing::elliptic_model(0.7);
  RngStream s = derive_stream({13, 0, StreamTag::Init});
  for (int r = 0; r < 100; ++r) {
    const int l = r % 4;
    const Vec x = 0.999 * model->sample_initial(l, s);
    const double fd = central(
        [&](double h) { return model->with_theta(Vec::Constant(1, 0.7 + h))->evaluate(l, x).log_gamma; }, 1e-5);
    EXPECT_LT(rel_err(fd, model->evaluate(l, x).score[0]), 1e-5);
    const Vec g = model->grad_log_gamma(l, x);
    for (int j = 0; j < 2; ++j) {
      Vec e = Vec::Zero(2);
      e[j] = 1.0;
      const double gd = central([&](double h) { return model->evaluate(l, x + h * e).log_gamma; }, 1e-5);
      EXPECT_LT(std::abs(gd - g[j]), 1e-5 * std::max(1.0, std::abs(g[j]))) << "x = " << x.transpose();
    }
  }
}

TEST(FiniteDifference, SirxScore) {
  auto model = testing::sirx_model();
  RngStream s = derive_stream({14, 0, StreamTag::Init});
  const Vec theta = model->theta();
  for (int r = 0; r < 100; ++r) {
    const Vec x = model->sample_initial(0, s);
    const Density d = model->evaluate(0, x);
    for (int j = 0; j < 2; ++j) {
      Vec e = Vec::Zero(2);
      e[j] = 1.0;
      const double fd =
          central([&](double h) { return model->with_theta(theta + h * e)->evaluate(0, x).log_gamma; }, 1e-5);
      EXPECT_LT(rel_err(fd, d.score[j]), 1e-5);
    }
  }
}

TEST(Sirx, ConservationAndMonotoneRemoval) {
  for (int l : {0, 2}) {
    const auto run = SirxModel::integrate(l, vec3(0.002, 0.3, 15.0));
    EXPECT_LT(run.max_conservation_error, 1e-12);
    EXPECT_TRUE(run.xi_monotone);
    EXPECT_EQ(run.daily.size(), SirxModel::kObservations);
    EXPECT_GT(run.daily.minCoeff(), 0.0);
  }
}

TEST(Sirx, InfectedDecayWithoutSusceptibles) {
  SirxModel::State s;
  s << 0.0, 0.5, 0.25, 0.25, 0.0;
  const Vec x = vec3(0.002, 0.3, 15.0);
  const auto d = SirxModel::vector_field(s, x);
  EXPECT_DOUBLE_EQ(d[1], -(SirxModel::kB + 0.002 + 0.3) * 0.5);
  EXPECT_NEAR(d.head<4>().sum(), 0.0, 1e-16);
}

TEST(Sirx, Rk4IsFourthOrder) {
  auto f = [](double, const Eigen::Matrix<double, 1, 1>& y) { return Eigen::Matrix<double, 1, 1>(-y); };
  std::vector<double> logh, loge;
  for (int k = 2; k <= 6; ++k) {
    const int steps = 1 << k;
    const double h = 1.0 / steps;
    Eigen::Matrix<double, 1, 1> y(1.0);
    for (int i = 0; i < steps; ++i) y = rk4_step(f, i * h, y, h);
    logh.push_back(std::log(h));
    loge.push_back(std::log(std::abs(y[0] - std::exp(-1.0))));
  }
  EXPECT_NEAR(fit_line(logh, loge).slope, 4.0, 0.15);
}

TEST(Sirx, ForwardDifferencesShrink) {
  const Vec x = vec3(0.002, 0.3, 15.0);
  double prev = (SirxModel::integrate(1, x).daily - SirxModel::integrate(0, x).daily).norm();
  for (int l = 2; l <= 3; ++l) {
    const double diff = (SirxModel::integrate(l, x).daily - SirxModel::integrate(l - 1, x).daily).norm();
    EXPECT_GT(prev / diff, 8.0) << "level " << l;
    prev = diff;
  }
}

TEST(Sirx, OutsideSupportIsMinusInfinity) {
  auto model = testing::sirx_model();
  for (const Vec& x : {vec3(0.0009, 0.3, 15.0), vec3(0.002, 0.41, 15.0), vec3(0.002, 0.3, 4.0)}) {
    const Density d = model->evaluate(0, x);
    EXPECT_FALSE(d.in_support());
    EXPECT_EQ(d.score.size(), 0);
    EXPECT_FALSE(model->in_support(x));
  }
  // observations at or above the forward model fall outside the likelihood support
  Dvec y = SirxModel::integrate(0, vec3(0.002, 0.3, 15.0)).daily * 2.0;
  SirxModel big(y, vec2(1.0, 1.0));
  EXPECT_FALSE(big.evaluate(0, vec3(0.002, 0.3, 15.0)).in_support());
}

TEST(Sirx, ValidatesInputs) {
  EXPECT_THROW(SirxModel(Dvec::Ones(5), vec2(1, 1)), Error);
  EXPECT_THROW(SirxModel(Dvec::Ones(40), vec2(-1, 1)), Error);
  EXPECT_THROW(SirxModel(-Dvec::Ones(40), vec2(1, 1)), Error);
}

TEST(Sirx, GeneratedDataSitsBelowTheForwardModel) {
  RngStream s = derive_stream({15, 0, StreamTag::Init});
  const Vec x = vec3(0.002, 0.3, 15.0);
  const Dvec y = SirxModel::generate_data(x, vec2(1, 1), 3, s);
  const Dvec g = SirxModel::integrate(3, x).daily;
  EXPECT_TRUE((y.array() < g.array()).all());
  EXPECT_TRUE((y.array() > 0.0).all());
}

}  // namespace
}  // namespace ubmc
