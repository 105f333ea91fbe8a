// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ubmc/coupled_kernel.hpp"
#include "ubmc/diagnostics.hpp"
#include "ubmc/error.hpp"

namespace ubmc {
namespace {

using testing::vec2;

/// Standard normal in d = 1 with a support cut at |x| > 10 and no levels.
class StdNormalTarget final : public DiscretizedTarget {
 public:
  std::string name() const override { return "std-normal"; }
  int dim() const override { return 1; }
  const LevelSchedule& schedule() const override { return schedule_; }
  double cost_exponent() const override { return 1.0; }
  const Vec& theta() const override { return theta_; }
  TargetPtr with_theta(const Vec&) const override { return std::make_shared<StdNormalTarget>(); }
  bool in_support(const Vec& x) const override { return std::abs(x[0]) <= 10.0; }
  Density evaluate(int, const Vec& x) const override {
    Density d;
    if (!in_support(x)) return d;
    d.log_gamma = -0.5 * x[0] * x[0];
    d.score = Vec::Zero(1);
    return d;
  }
  bool has_gradient() const override { return true; }
  Vec grad_log_gamma(int, const Vec& x) const override { return -x; }
  Vec sample_initial(int, RngStream& s) const override { return sample_std_normal_vec(s, 1); }

 private:
  LevelSchedule schedule_{1.0, 0};
  Vec theta_ = Vec::Ones(1);
};

Vec scalar(double a) {
  Vec v(1);
  v << a;
  return v;
}

TEST(MhAccept, DetailedBalanceAlwaysAccepts) {
  // log gamma(x') + q_bwd == log gamma(x) + q_fwd
  EXPECT_TRUE(mh_accept_log(-1.0, -2.0, -3.0, -2.0, 0.999999));
}

TEST(MhAccept, OutOfSupportRejects) {
  EXPECT_FALSE(mh_accept_log(-1.0, kNegInf, 0.0, 0.0, 1e-300));
}

TEST(MhAccept, HandFormula) {
  StdNormalTarget t;
  CostLedger ledger;
  // log alpha = min(0, -0.5 * 4 + 0.5 * 1) = -1.5 under a symmetric proposal.
  EXPECT_TRUE(bitwise_equal(mh_accept(t, 0, scalar(1), scalar(2), 0.0, 0.0, std::exp(-1.5) * 0.99, ledger),
                            scalar(2)));
  EXPECT_TRUE(bitwise_equal(mh_accept(t, 0, scalar(1), scalar(2), 0.0, 0.0, std::exp(-1.5) * 1.01, ledger),
                            scalar(1)));
  EXPECT_EQ(ledger.evaluations(), 4u);
  try {
    mh_accept(t, 0, scalar(11), scalar(0), 0.0, 0.0, 0.5, ledger);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidCurrentState);
  }
}

TEST(Leapfrog, OneStepArithmetic) {
  StdNormalTarget t;
  auto [x, v] = leapfrog(t, 0, scalar(1.0), scalar(0.0), 0.1, 1);
  EXPECT_NEAR(x[0], oracle::kLeapfrogX1, 1e-15);
  EXPECT_NEAR(v[0], oracle::kLeapfrogV1, 1e-15);
}

TEST(Leapfrog, Reversible) {
  auto toy = testing::toy_model();
  const Vec x0 = vec2(1.7, -2.1), v0 = vec2(0.3, 0.9);
  auto [x1, v1] = leapfrog(*toy, 3, x0, v0, 0.05, 25);
  auto [x2, v2] = leapfrog(*toy, 3, x1, Vec(-v1), 0.05, 25);
  EXPECT_LT((x2 - x0).norm(), 1e-10);
  EXPECT_LT((v2 + v0).norm(), 1e-10);
}

TEST(Leapfrog, EnergyErrorIsSecondOrder) {
  StdNormalTarget t;
  std::vector<double> le, lh;
  for (double eps : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    const int steps = static_cast<int>(std::lround(1.0 / eps));
    auto [x, v] = leapfrog(t, 0, scalar(1.0), scalar(0.5), eps, steps);
    const double dh = std::abs(0.5 * (x[0] * x[0] + v[0] * v[0]) - 0.5 * (1.0 + 0.25));
    le.push_back(std::log(eps));
    lh.push_back(std::log(dh));
  }
  EXPECT_NEAR(fit_line(le, lh).slope, 2.0, 0.2);
}

TEST(Leapfrog, NeedsGradient) {
  auto sirx = testing::sirx_model();
  EXPECT_THROW(leapfrog(*sirx, 0, testing::vec3(0.002, 0.3, 15), testing::vec3(0, 0, 0), 0.1, 1), Error);
  KernelConfig kc;
  kc.kind = KernelKind::HmcMix;
  try {
    CoupledKernel k(sirx, kc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HmcUnsupported);
  }
}

TEST(Leapfrog, HugeStepIsRejected) {
  auto t = std::make_shared<StdNormalTarget>();
  KernelConfig kc;
  kc.kind = KernelKind::HmcMix;
  kc.hmc.epsilon = 50.0;
  kc.hmc.steps = 5;
  kc.hmc.kappa = 0.999;
  CoupledKernel k(t, kc);
  RngStream s = derive_stream({1, 0, StreamTag::Chain});
  CostLedger ledger;
  ChainPoint p = k.make_point(0, scalar(0.5), ledger);
  int moves = 0;
  for (int i = 0; i < 200; ++i) {
    const Vec before = p.x;
    k.step_single(0, p, s, ledger);
    // the rare RWMH fallback moves by ~1e-4; an accepted trajectory would jump far
    moves += std::abs(p.x[0] - before[0]) > 1e-2;
  }
  EXPECT_EQ(moves, 0);
}

TEST(CoupledKernel, PairFaithfulAfterMeeting) {
  auto toy = testing::toy_model();
  for (auto kc : {testing::toy_pcn_config(CouplingKind::QuadMax), testing::toy_pcn_config(),
                  testing::toy_hmc_config()}) {
    CoupledKernel k(toy, kc);
    RngStream init = derive_stream({2, 0, StreamTag::Init});
    RngStream chain = derive_stream({2, 0, StreamTag::Chain});
    CostLedger ledger;
    PairState s = k.initial_pair(2, init, ledger);
    for (long n = 1; n <= 3000; ++n) {
      k.step_pair(2, s, n, chain, ledger);
      if (s.met()) ASSERT_TRUE(bitwise_equal(s.x.x, s.w.x));
    }
    EXPECT_TRUE(s.met()) << to_string(kc.kind);
  }
}

TEST(CoupledKernel, EqualQuadStaysEqual) {
  auto toy = testing::toy_model();
  CoupledKernel k(toy, testing::toy_pcn_config(CouplingKind::QuadMax));
  RngStream s = derive_stream({3, 0, StreamTag::Chain});
  CostLedger ledger;
  ChainPoint a = k.make_point(3, vec2(2, -2), ledger);
  ChainPoint b = k.make_point(2, vec2(2, -2), ledger);
  QuadState z{{a, a, 0}, {b, b, 0}, 0};
  for (int i = 0; i < 500; ++i) {
    k.step_quad(3, z, s, ledger);
    ASSERT_TRUE(bitwise_equal(z.upper.x.x, z.upper.w.x));
    ASSERT_TRUE(bitwise_equal(z.lower.x.x, z.lower.w.x));
  }
  EXPECT_EQ(z.n, 500);
}

TEST(CoupledKernel, QuadMaxCanMeetAcrossLevels) {
  auto toy = testing::toy_model();
  CoupledKernel k(toy, testing::toy_pcn_config(CouplingKind::QuadMax));
  RngStream s = derive_stream({4, 0, StreamTag::Coupling});
  auto p = GaussianProposal::pcn_isotropic(2, 0.95, 4.0);
  QuadPositions z{vec2(1, -1), vec2(1.2, -1.1), vec2(1.01, -1), vec2(1.2, -1.05)};
  int all = 0;
  for (int i = 0; i < 10'000; ++i) all += maximal_quad(p, p, z, s).all_met;
  EXPECT_GT(all, 0);
}

TEST(CoupledKernel, SharedUniformAgreesOnIdenticalChains) {
  // Two chains with identical state and proposal accept or reject together,
  // and the twin costs nothing.
  auto toy = testing::toy_model();
  CoupledKernel k(toy, testing::toy_pcn_config());
  RngStream s = derive_stream({5, 0, StreamTag::Chain});
  CostLedger ledger;
  ChainPoint a = k.make_point(1, vec2(0.5, 0.5), ledger);
  PairState ps{a, a, std::nullopt};
  const double before = ledger.units();
  k.step_pair(1, ps, 1, s, ledger);
  EXPECT_TRUE(bitwise_equal(ps.x.x, ps.w.x));
  EXPECT_DOUBLE_EQ(ledger.units() - before, toy->level_cost(1));
}

TEST(CoupledKernel, SingleChainIsInvariant) {
  // 10^5 steps at level 2; batch means give the standard error of the mean.
  auto toy = testing::toy_model();
  CoupledKernel k(toy, testing::toy_pcn_config());
  RngStream s = derive_stream({6, 0, StreamTag::Chain});
  CostLedger ledger;
  ChainPoint p = k.make_point(2, vec2(0, 0), ledger);
  for (int i = 0; i < 1000; ++i) k.step_single(2, p, s, ledger);
  const int batches = 100, len = 1000;
  std::vector<Eigen::Vector2d> means;
  for (int b = 0; b < batches; ++b) {
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    for (int i = 0; i < len; ++i) {
      k.step_single(2, p, s, ledger);
      m += to_vec2(p.x) / len;
    }
    means.push_back(m);
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
  for (auto& m : means) mean += m / batches;
  for (auto& m : means) sq += (m - mean).cwiseAbs2() / (batches - 1);
  const auto post = toy->posterior(2);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(mean[j], post.mean[j], 4.0 * std::sqrt(sq[j] / batches)) << "coordinate " << j;
  }
}

TEST(CoupledKernel, XLeadsWByOneStep) {
  // X_0 = K(X'), W_0 ~ initializer: X_0 and W_1 share a marginal law. Compare
  // across disjoint replicate sets so the samples are independent.
  auto toy = testing::toy_model();
  CoupledKernel k(toy, testing::toy_pcn_config());
  std::vector<double> x0, w1;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    RngStream init = derive_stream({7, r, StreamTag::Init});
    RngStream chain = derive_stream({7, r, StreamTag::Chain});
    CostLedger ledger;
    PairState s = k.initial_pair(0, init, ledger);
    if (r % 2 == 0) {
      x0.push_back(s.x.x[0]);
    } else {
      k.step_pair(0, s, 1, chain, ledger);
      w1.push_back(s.w.x[0]);
    }
  }
  EXPECT_GT(ks_test_two_sample(x0, w1).second, 0.01);
}

TEST(CoupledKernel, InitialQuadPerturbationVariance) {
  auto toy = testing::toy_model();
  KernelConfig kc = testing::toy_pcn_config();
  CoupledKernel k(toy, kc);
  const int level = 6;
  double sq = 0.0;
  const int n = 4000;
  for (int r = 0; r < n; ++r) {
    RngStream init = derive_stream({8, static_cast<std::uint64_t>(r), StreamTag::Init});
    CostLedger ledger;
    QuadState z = k.initial_quad(level, init, ledger);
    sq += (z.upper.w.x - z.lower.w.x).squaredNorm() / (2.0 * n);
  }
  EXPECT_NEAR(sq, std::ldexp(1.0, -(2 * level + 1)), 0.1 * std::ldexp(1.0, -(2 * level + 1)));
}

TEST(CoupledKernel, ConfigValidation) {
  auto toy = testing::toy_model();
  KernelConfig kc;
  kc.kind = KernelKind::Pcn;
  kc.proposals = ProposalLadder(GaussianProposal::pcn_isotropic(3, 0.9, 1.0));
  EXPECT_THROW(CoupledKernel(toy, kc), Error);
  kc.proposals = ProposalLadder(GaussianProposal::rwmh_isotropic(2, 1.0));
  EXPECT_THROW(CoupledKernel(toy, kc), Error);
  KernelConfig h = testing::toy_hmc_config();
  h.hmc.kappa = 1.0;
  EXPECT_THROW(CoupledKernel(toy, h), Error);
  for (auto kind : {KernelKind::Rwmh, KernelKind::Pcn, KernelKind::HmcMix}) {
    EXPECT_EQ(parse_kernel_kind(to_string(kind)), kind);
  }
}

}  // namespace
}  // namespace ubmc
