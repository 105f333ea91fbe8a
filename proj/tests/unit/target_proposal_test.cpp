// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ubmc/diagnostics.hpp"
#include "ubmc/error.hpp"
#include "ubmc/proposal.hpp"
#include "ubmc/target.hpp"

namespace ubmc {
namespace {

using testing::vec2;

TEST(EvalLogGamma, OutsideSupportStillCharges) {
  auto model = testing::elliptic_model();
  CostLedger ledger;
  EXPECT_EQ(eval_log_gamma(*model, 2, vec2(1.5, 0.0), ledger), kNegInf);
  EXPECT_DOUBLE_EQ(ledger.units(), model->level_cost(2));
  EXPECT_EQ(ledger.evaluations(), 1u);
}

TEST(EvalLogGamma, PureAndFinite) {
  auto model = testing::toy_model();
  CostLedger ledger;
  const double a = eval_log_gamma(*model, 3, vec2(0.3, -1.2), ledger);
  const double b = eval_log_gamma(*model, 3, vec2(0.3, -1.2), ledger);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(ledger.units(), 2.0 * model->level_cost(3));
}

TEST(EvalLogGamma, DimensionMismatch) {
  auto model = testing::toy_model();
  CostLedger ledger;
  try {
    eval_log_gamma(*model, 0, testing::vec3(0, 0, 0), ledger);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDimension);
  }
}

TEST(CostLedger, LevelCostDoubles) {
  auto model = testing::toy_model();
  for (int l = 0; l < 8; ++l) EXPECT_DOUBLE_EQ(model->level_cost(l + 1), 2.0 * model->level_cost(l));
}

TEST(GaussianProposal, IdentityFactor) {
  auto p = GaussianProposal::rwmh_isotropic(2, 1.0);
  const Vec x = vec2(1.0, 2.0), v = vec2(-0.5, 0.25);
  EXPECT_TRUE(bitwise_equal(p.propose_with(x, v), Vec(x + v)));
}

TEST(GaussianProposal, PcnRhoZeroIgnoresX) {
  auto p = GaussianProposal::pcn_isotropic(2, 0.0, 3.0);
  const Vec v = vec2(0.1, -0.2);
  EXPECT_TRUE(bitwise_equal(p.propose_with(vec2(5, 5), v), p.propose_with(vec2(-9, 1), v)));
}

TEST(GaussianProposal, StandardNormalAtMode) {
  auto p = GaussianProposal::rwmh_isotropic(1, 1.0);
  Vec z(1);
  z << 0.0;
  EXPECT_NEAR(p.log_density(z, z), oracle::kLogStdNormalAtZero, 1e-15);
}

TEST(GaussianProposal, RwmhSymmetric) {
  Mat s(2, 2);
  s << 0.7, 0.0, 0.3, 1.2;
  auto p = GaussianProposal::rwmh(s);
  RngStream st = derive_stream({1, 0, StreamTag::Chain});
  for (int i = 0; i < 100; ++i) {
    const Vec a = sample_std_normal_vec(st, 2), b = sample_std_normal_vec(st, 2);
    EXPECT_NEAR(p.log_density(a, b), p.log_density(b, a), 1e-12);
  }
}

TEST(GaussianProposal, PcnDensityFormulaAndMass) {
  auto p = GaussianProposal::pcn_isotropic(1, 0.95, 4.0);
  Vec x(1), xp(1);
  x << 1.3;
  const double var = oracle::kPcnVariance;
  double mass = 0.0;
  const double h = 1e-3;
  for (double t = -15.0; t < 15.0; t += h) {
    xp << t;
    const double expected = -0.5 * std::log(2 * M_PI * var) - 0.5 * (t - 0.95 * 1.3) * (t - 0.95 * 1.3) / var;
    if (std::abs(t) < 3) ASSERT_NEAR(p.log_density(x, xp), expected, 1e-12);
    mass += std::exp(p.log_density(x, xp)) * h;
  }
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(GaussianProposal, SamplesMatchCdf) {
  auto p = GaussianProposal::pcn_isotropic(1, 0.5, 2.0);
  Vec x(1);
  x << 1.0;
  RngStream st = derive_stream({2, 0, StreamTag::Chain});
  std::vector<double> draws;
  for (int i = 0; i < 100'000; ++i) draws.push_back(p.propose(x, st)[0]);
  const double sd = std::sqrt(1 - 0.25) * 2.0;
  auto [d, pv] = ks_test(draws, [&](double t) { return normal_cdf((t - 0.5) / sd); });
  EXPECT_GT(pv, 0.01) << "D = " << d;
}

TEST(GaussianProposal, Validation) {
  Mat upper(2, 2);
  upper << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(GaussianProposal::rwmh(upper), Error);
  EXPECT_THROW(GaussianProposal::rwmh_isotropic(2, 0.0), Error);
  EXPECT_THROW(GaussianProposal::pcn_isotropic(2, 1.0, 1.0), Error);
}

TEST(ProposalLadder, Overrides) {
  ProposalLadder ladder(GaussianProposal::rwmh_isotropic(1, 1.0));
  ladder.set_override(3, GaussianProposal::rwmh_isotropic(1, 0.5));
  EXPECT_EQ(ladder.at(2).factor()(0, 0), 1.0);
  EXPECT_EQ(ladder.at(3).factor()(0, 0), 0.5);
}

}  // namespace
}  // namespace ubmc
