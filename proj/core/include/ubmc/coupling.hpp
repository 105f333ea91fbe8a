// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ubmc/proposal.hpp"
#include "ubmc/rng.hpp"
#include "ubmc/types.hpp"

namespace ubmc {

/// Proposals for one pair of chains. `met` is exact bitwise equality.
struct PairProposalDraw {
  Vec x_prop;
  Vec w_prop;
  bool met = false;
};

/// Current positions of the four chains ((x_l, w_l), (x_lm1, w_lm1)).
struct QuadPositions {
  Vec x_l;
  Vec w_l;
  Vec x_lm1;
  Vec w_lm1;
};

struct QuadProposalDraw {
  Vec x_l;
  Vec w_l;
  Vec x_lm1;
  Vec w_lm1;
  bool all_met = false;

  PairProposalDraw upper() const;
  PairProposalDraw lower() const;
};

/// Residual rejection samplers give up after this many attempts.
inline constexpr long kRejectionCap = 1'000'000;

/// Maximal coupling of Q(x, .) and Q(w, .) by Thorisson's algorithm.
PairProposalDraw maximal_pair(const GaussianProposal& p, const Vec& x, const Vec& w, RngStream& stream);

/// Four-way maximal coupling of Q_l(x_l), Q_l(w_l), Q_lm1(x_lm1), Q_lm1(w_lm1):
/// try a common draw from the overlap, otherwise sample each chain from its
/// residual. Pairs that are equal on entry stay equal.
QuadProposalDraw maximal_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1, const QuadPositions& z,
                              RngStream& stream);

/// Reflection-maximal coupling of one level pair driven by the noise `v`.
/// `u` decides the meeting event so callers can share it across levels.
PairProposalDraw reflection_maximal_with(const GaussianProposal& p, const Vec& x, const Vec& w, const Vec& v,
                                         double u);
PairProposalDraw reflection_maximal_pair(const GaussianProposal& p, const Vec& x, const Vec& w,
                                         RngStream& stream);
/// One shared v and one shared meeting uniform drive both levels.
QuadProposalDraw reflection_maximal_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                         const QuadPositions& z, RngStream& stream);

/// Common-noise pCN: ||X' - W'|| = rho ||x - w||; proposals never meet from x != w.
PairProposalDraw synchronous_pcn_pair(const GaussianProposal& p, const Vec& x, const Vec& w, RngStream& stream);
QuadProposalDraw synchronous_pcn_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                      const QuadPositions& z, RngStream& stream);

/// Independent maximal couplings per level; a diagnostic baseline only.
QuadProposalDraw independent_max_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                      const QuadPositions& z, RngStream& stream);

enum class CouplingKind { IndependentMax, QuadMax, ReflectionMax, SyncPcnMix };

CouplingKind parse_coupling_kind(const std::string& s);
std::string to_string(CouplingKind kind);

struct CouplingConfig {
  CouplingKind kind = CouplingKind::ReflectionMax;
  /// Probability of the synchronous branch in sync-pcn-mix.
  double kappa = 0.5;
  /// Meeting branch of sync-pcn-mix: QuadMax or ReflectionMax.
  CouplingKind meet = CouplingKind::ReflectionMax;

  void validate() const;
};

/// kappa * primary + (1 - kappa) * meet, for any two quad couplings.
template <typename Primary, typename Meet>
QuadProposalDraw mixture_quad(double kappa, Primary&& primary, Meet&& meet, const QuadPositions& z,
                              RngStream& stream);

PairProposalDraw couple_pair(const CouplingConfig& cfg, const GaussianProposal& p, const Vec& x, const Vec& w,
                             RngStream& stream);
QuadProposalDraw couple_quad(const CouplingConfig& cfg, const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                             const QuadPositions& z, RngStream& stream);

void check_mixture_kappa(double kappa);

template <typename Primary, typename Meet>
QuadProposalDraw mixture_quad(double kappa, Primary&& primary, Meet&& meet, const QuadPositions& z,
                              RngStream& stream) {
  check_mixture_kappa(kappa);
  if (stream.uniform() < kappa) return primary(z, stream);
  return meet(z, stream);
}

}  // namespace ubmc
