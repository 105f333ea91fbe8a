// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "ubmc/coupling.hpp"
#include "ubmc/proposal.hpp"
#include "ubmc/target.hpp"

namespace ubmc {

/// A chain position with its cached level density.
struct ChainPoint {
  Vec x;
  Density density;
};

struct PairState {
  ChainPoint x;
  ChainPoint w;
  std::optional<long> met_at;

  bool met() const { return met_at.has_value(); }
};

struct QuadState {
  PairState upper;  // level l
  PairState lower;  // level l - 1
  long n = 0;
};

enum class KernelKind { Rwmh, Pcn, HmcMix };

KernelKind parse_kernel_kind(const std::string& s);
std::string to_string(KernelKind kind);

struct HmcSettings {
  double epsilon = 0.1;
  int steps = 10;
  double kappa = 0.9;
  /// RWMH fallback scale: covariance fallback_scale^2 I.
  double fallback_scale = 1e-4;
  CouplingKind fallback_coupling = CouplingKind::ReflectionMax;

  void validate() const;
};

struct KernelConfig {
  KernelKind kind = KernelKind::Pcn;
  ProposalLadder proposals = ProposalLadder(GaussianProposal::pcn_isotropic(1, 0.95, 1.0));
  CouplingConfig coupling{};
  HmcSettings hmc{};
  /// Initial cross-level perturbation variance is factor * 2^{-(2l+1)} * init_scale^2.
  double init_variance_factor = 1.0;

  void validate(int dim) const;
};

/// MH decision in log space: accept iff log u < min{0, [lg_xp + q_bwd] - [lg_x + q_fwd]}.
bool mh_accept_log(double log_gamma_x, double log_gamma_xp, double q_fwd_log, double q_bwd_log, double u);

/// Returns xp on acceptance, else x. A current state outside the support is an
/// error: chains are initialised inside it and never accept a -inf proposal.
Vec mh_accept(const DiscretizedTarget& target, int level, const Vec& x, const Vec& xp, double q_fwd_log,
              double q_bwd_log, double u, CostLedger& ledger);

/// M leapfrog steps for the Hamiltonian -log pi + |v|^2 / 2. Returns NaN
/// positions if the gradient stops being finite.
template <typename Grad>
std::pair<Vec, Vec> leapfrog(Grad&& grad, Vec x, Vec v, double eps, int steps) {
  Vec g = grad(x);
  for (int m = 0; m < steps; ++m) {
    if (!g.allFinite()) break;
    v += 0.5 * eps * g;
    x += eps * v;
    g = grad(x);
    v += 0.5 * eps * g;
  }
  if (!g.allFinite() || !x.allFinite()) x.setConstant(std::numeric_limits<double>::quiet_NaN());
  return {std::move(x), std::move(v)};
}

std::pair<Vec, Vec> leapfrog(const DiscretizedTarget& target, int level, const Vec& x0, const Vec& v0, double eps,
                             int steps);

/// Coupled transitions on one level pair or on two adjacent level pairs.
///
/// Every chain transition charges the ledger one Delta_s^{-omega} unit. A W
/// chain that sits on its X partner and receives the same proposal reuses the
/// X result instead of being evaluated again.
class CoupledKernel {
 public:
  CoupledKernel(TargetPtr target, KernelConfig config);

  const DiscretizedTarget& target() const { return *target_; }
  const KernelConfig& config() const { return config_; }

  ChainPoint make_point(int level, Vec x, CostLedger& ledger) const;

  void step_single(int level, ChainPoint& p, RngStream& stream, CostLedger& ledger) const;
  void step_pair(int level, PairState& s, long n, RngStream& stream, CostLedger& ledger) const;
  void step_quad(int level, QuadState& z, RngStream& stream, CostLedger& ledger) const;

  /// X', W from the initializer; X_0 = K_l(X').
  PairState initial_pair(int level, RngStream& stream, CostLedger& ledger) const;
  /// Lower-level draws, perturbed up to level l, then the X pair advanced by
  /// one cross-level transition. Requires level >= 1.
  QuadState initial_quad(int level, RngStream& stream, CostLedger& ledger) const;

 private:
  struct Slot {
    int level;
    ChainPoint* point;
    const GaussianProposal* proposal;
  };

  void mh_slots(Slot* slots, int count, const Vec* props, double u, CostLedger& ledger) const;
  void hmc_slots(Slot* slots, int count, RngStream& stream, CostLedger& ledger) const;
  void mh_quad(int level, ChainPoint* c, const GaussianProposal& p_l, const GaussianProposal& p_lm1,
               const CouplingConfig& coupling, RngStream& stream, CostLedger& ledger) const;
  void mh_pair(int level, ChainPoint* c, const GaussianProposal& p, const CouplingConfig& coupling,
               RngStream& stream, CostLedger& ledger) const;
  void quad_transition(int level, ChainPoint* c, RngStream& stream, CostLedger& ledger) const;
  ChainPoint perturb_up(int level, const Vec& x, RngStream& stream, CostLedger& ledger) const;

  TargetPtr target_;
  KernelConfig config_;
  GaussianProposal fallback_;
};

}  // namespace ubmc
