// SPDX-License-Identifier: Apache-2.0
#include "ubmc/coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

namespace {

// Up to four (kernel, centre) slots. Slots 2k and 2k+1 form a level pair.
struct Slots {
  std::array<const GaussianProposal*, 4> q{};
  std::array<const Vec*, 4> centre{};
  int count = 0;

  double log_q(int i, const Vec& u) const { return q[i]->log_density(*centre[i], u); }

  // min over i != j of log q_i(u) - log q_j(u), capped at 0.
  double log_overlap_ratio(int j, const Vec& u) const {
    const double lj = log_q(j, u);
    double m = 0.0;
    for (int i = 0; i < count; ++i) {
      if (i == j) continue;
      m = std::min(m, log_q(i, u) - lj);
    }
    return m;
  }

  bool twin_of_previous(int j) const { return (j % 2 == 1) && bitwise_equal(*centre[j], *centre[j - 1]); }
};

Vec sample_residual(const Slots& s, int j, RngStream& stream) {
  for (long it = 0; it < kRejectionCap; ++it) {
    Vec u = s.q[j]->propose(*s.centre[j], stream);
    // accept with probability 1 - exp(m)
    const double m = s.log_overlap_ratio(j, u);
    if (std::log(stream.uniform()) >= m) return u;
  }
  throw Error(ErrorKind::CouplingStall, "residual sampler exceeded the rejection cap");
}

std::array<Vec, 4> multi_maximal(const Slots& s, RngStream& stream, bool& all_met) {
  std::array<Vec, 4> out;
  Vec u = s.q[0]->propose(*s.centre[0], stream);
  const double m = s.log_overlap_ratio(0, u);
  if (std::log(stream.uniform()) < m) {
    for (int i = 0; i < s.count; ++i) out[i] = u;
    all_met = true;
    return out;
  }
  all_met = false;
  out[0] = std::move(u);
  for (int j = 1; j < s.count; ++j) {
    if (s.twin_of_previous(j)) {
      out[j] = out[j - 1];
    } else {
      out[j] = sample_residual(s, j, stream);
    }
  }
  return out;
}

Slots quad_slots(const GaussianProposal& p_l, const GaussianProposal& p_lm1, const QuadPositions& z) {
  Slots s;
  s.q = {&p_l, &p_l, &p_lm1, &p_lm1};
  s.centre = {&z.x_l, &z.w_l, &z.x_lm1, &z.w_lm1};
  s.count = 4;
  return s;
}

QuadProposalDraw assemble(PairProposalDraw up, PairProposalDraw lo) {
  QuadProposalDraw d;
  d.all_met = up.met && lo.met && bitwise_equal(up.x_prop, lo.x_prop);
  d.x_l = std::move(up.x_prop);
  d.w_l = std::move(up.w_prop);
  d.x_lm1 = std::move(lo.x_prop);
  d.w_lm1 = std::move(lo.w_prop);
  return d;
}

void check_dims(const GaussianProposal& p, const Vec& x, const Vec& w) {
  if (x.size() != p.dim() || w.size() != p.dim()) {
    throw Error(ErrorKind::InvalidDimension, "coupling input does not match the proposal dimension");
  }
}

}  // namespace

PairProposalDraw QuadProposalDraw::upper() const { return {x_l, w_l, bitwise_equal(x_l, w_l)}; }

PairProposalDraw QuadProposalDraw::lower() const { return {x_lm1, w_lm1, bitwise_equal(x_lm1, w_lm1)}; }

PairProposalDraw maximal_pair(const GaussianProposal& p, const Vec& x, const Vec& w, RngStream& stream) {
  check_dims(p, x, w);
  Slots s;
  s.q = {&p, &p, nullptr, nullptr};
  s.centre = {&x, &w, nullptr, nullptr};
  s.count = 2;
  bool met = false;
  auto out = multi_maximal(s, stream, met);
  PairProposalDraw d{std::move(out[0]), std::move(out[1]), false};
  d.met = bitwise_equal(d.x_prop, d.w_prop);
  return d;
}

QuadProposalDraw maximal_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1, const QuadPositions& z,
                              RngStream& stream) {
  check_dims(p_l, z.x_l, z.w_l);
  check_dims(p_lm1, z.x_lm1, z.w_lm1);
  bool met = false;
  auto out = multi_maximal(quad_slots(p_l, p_lm1, z), stream, met);
  QuadProposalDraw d{std::move(out[0]), std::move(out[1]), std::move(out[2]), std::move(out[3]), met};
  return d;
}

PairProposalDraw reflection_maximal_with(const GaussianProposal& p, const Vec& x, const Vec& w, const Vec& v,
                                         double u) {
  PairProposalDraw d;
  d.x_prop = p.propose_with(x, v);
  if (bitwise_equal(x, w)) {
    d.w_prop = d.x_prop;
    d.met = true;
    return d;
  }
  const Vec off = p.whiten(p.mean(x) - p.mean(w));
  const double norm = off.norm();
  if (!(norm > 0.0)) {
    // distinct states with identical means (pCN at rho = 0): the kernels coincide
    d.w_prop = d.x_prop;
    d.met = true;
    return d;
  }
  // log phi(v + off) - log phi(v)
  const double log_ratio = -v.dot(off) - 0.5 * norm * norm;
  if (std::log(u) < std::min(0.0, log_ratio)) {
    d.w_prop = d.x_prop;
    d.met = true;
    return d;
  }
  const Vec e = off / norm;
  const Vec v_refl = v - 2.0 * v.dot(e) * e;
  d.w_prop = p.propose_with(w, v_refl);
  d.met = bitwise_equal(d.x_prop, d.w_prop);
  return d;
}

PairProposalDraw reflection_maximal_pair(const GaussianProposal& p, const Vec& x, const Vec& w,
                                         RngStream& stream) {
  check_dims(p, x, w);
  const Vec v = sample_std_normal_vec(stream, p.dim());
  return reflection_maximal_with(p, x, w, v, stream.uniform());
}

QuadProposalDraw reflection_maximal_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                         const QuadPositions& z, RngStream& stream) {
  check_dims(p_l, z.x_l, z.w_l);
  check_dims(p_lm1, z.x_lm1, z.w_lm1);
  if (p_l.dim() != p_lm1.dim()) throw Error(ErrorKind::InvalidDimension, "level proposals differ in dimension");
  const Vec v = sample_std_normal_vec(stream, p_l.dim());
  const double u = stream.uniform();
  return assemble(reflection_maximal_with(p_l, z.x_l, z.w_l, v, u),
                  reflection_maximal_with(p_lm1, z.x_lm1, z.w_lm1, v, u));
}

namespace {

PairProposalDraw sync_with(const GaussianProposal& p, const Vec& x, const Vec& w, const Vec& v) {
  if (p.kind() != ProposalKind::Pcn) throw Error(ErrorKind::InvalidArgument, "synchronous coupling needs pCN");
  PairProposalDraw d;
  d.x_prop = p.propose_with(x, v);
  d.w_prop = bitwise_equal(x, w) ? d.x_prop : p.propose_with(w, v);
  d.met = bitwise_equal(d.x_prop, d.w_prop);
  return d;
}

}  // namespace

PairProposalDraw synchronous_pcn_pair(const GaussianProposal& p, const Vec& x, const Vec& w, RngStream& stream) {
  check_dims(p, x, w);
  return sync_with(p, x, w, sample_std_normal_vec(stream, p.dim()));
}

QuadProposalDraw synchronous_pcn_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                      const QuadPositions& z, RngStream& stream) {
  check_dims(p_l, z.x_l, z.w_l);
  check_dims(p_lm1, z.x_lm1, z.w_lm1);
  const Vec v = sample_std_normal_vec(stream, p_l.dim());
  return assemble(sync_with(p_l, z.x_l, z.w_l, v), sync_with(p_lm1, z.x_lm1, z.w_lm1, v));
}

QuadProposalDraw independent_max_quad(const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                                      const QuadPositions& z, RngStream& stream) {
  auto up = maximal_pair(p_l, z.x_l, z.w_l, stream);
  auto lo = maximal_pair(p_lm1, z.x_lm1, z.w_lm1, stream);
  return assemble(std::move(up), std::move(lo));
}

CouplingKind parse_coupling_kind(const std::string& s) {
  if (s == "independent-max") return CouplingKind::IndependentMax;
  if (s == "quad-max") return CouplingKind::QuadMax;
  if (s == "reflection-max") return CouplingKind::ReflectionMax;
  if (s == "sync-pcn-mix") return CouplingKind::SyncPcnMix;
  throw Error(ErrorKind::Config, "unknown coupling kind '" + s + "'");
}

std::string to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::IndependentMax: return "independent-max";
    case CouplingKind::QuadMax: return "quad-max";
    case CouplingKind::ReflectionMax: return "reflection-max";
    case CouplingKind::SyncPcnMix: return "sync-pcn-mix";
  }
  return "unknown";
}

void check_mixture_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidArgument, "mixture kappa must lie in (0, 1)");
}

void CouplingConfig::validate() const {
  if (kind == CouplingKind::SyncPcnMix) {
    check_mixture_kappa(kappa);
    if (meet != CouplingKind::QuadMax && meet != CouplingKind::ReflectionMax) {
      throw Error(ErrorKind::Config, "sync-pcn-mix needs a quad-max or reflection-max meeting branch");
    }
  }
}

PairProposalDraw couple_pair(const CouplingConfig& cfg, const GaussianProposal& p, const Vec& x, const Vec& w,
                             RngStream& stream) {
  switch (cfg.kind) {
    case CouplingKind::IndependentMax:
    case CouplingKind::QuadMax: return maximal_pair(p, x, w, stream);
    case CouplingKind::ReflectionMax: return reflection_maximal_pair(p, x, w, stream);
    case CouplingKind::SyncPcnMix:
      check_mixture_kappa(cfg.kappa);
      if (stream.uniform() < cfg.kappa) return synchronous_pcn_pair(p, x, w, stream);
      return cfg.meet == CouplingKind::QuadMax ? maximal_pair(p, x, w, stream)
                                              : reflection_maximal_pair(p, x, w, stream);
  }
  throw Error(ErrorKind::Config, "unhandled coupling kind");
}

QuadProposalDraw couple_quad(const CouplingConfig& cfg, const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                             const QuadPositions& z, RngStream& stream) {
  switch (cfg.kind) {
    case CouplingKind::IndependentMax: return independent_max_quad(p_l, p_lm1, z, stream);
    case CouplingKind::QuadMax: return maximal_quad(p_l, p_lm1, z, stream);
    case CouplingKind::ReflectionMax: return reflection_maximal_quad(p_l, p_lm1, z, stream);
    case CouplingKind::SyncPcnMix: {
      auto sync = [&](const QuadPositions& q, RngStream& s) { return synchronous_pcn_quad(p_l, p_lm1, q, s); };
      if (cfg.meet == CouplingKind::QuadMax) {
        return mixture_quad(
            cfg.kappa, sync, [&](const QuadPositions& q, RngStream& s) { return maximal_quad(p_l, p_lm1, q, s); },
            z, stream);
      }
      return mixture_quad(
          cfg.kappa, sync,
          [&](const QuadPositions& q, RngStream& s) { return reflection_maximal_quad(p_l, p_lm1, q, s); }, z,
          stream);
    }
  }
  throw Error(ErrorKind::Config, "unhandled coupling kind");
}

}  // namespace ubmc
