// SPDX-License-Identifier: Apache-2.0
#include "ubmc/coupled_kernel.hpp"

#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "rwmh") return KernelKind::Rwmh;
  if (s == "pcn") return KernelKind::Pcn;
  if (s == "hmc-mix") return KernelKind::HmcMix;
  throw Error(ErrorKind::Config, "unknown kernel kind '" + s + "'");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Rwmh: return "rwmh";
    case KernelKind::Pcn: return "pcn";
    case KernelKind::HmcMix: return "hmc-mix";
  }
  return "unknown";
}

void HmcSettings::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorKind::InvalidArgument, "hmc epsilon must be > 0");
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "hmc steps must be >= 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidArgument, "hmc kappa must lie in (0, 1)");
  if (!(fallback_scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "hmc fallback scale must be > 0");
  if (fallback_coupling == CouplingKind::SyncPcnMix) {
    throw Error(ErrorKind::Config, "the RWMH fallback cannot use a pCN coupling");
  }
}

void KernelConfig::validate(int dim) const {
  coupling.validate();
  if (kind == KernelKind::HmcMix) {
    hmc.validate();
    return;
  }
  const auto& p = proposals.at(0);
  if (p.dim() != dim) throw Error(ErrorKind::InvalidDimension, "proposal dimension does not match the target");
  const auto want = kind == KernelKind::Pcn ? ProposalKind::Pcn : ProposalKind::Rwmh;
  if (p.kind() != want) throw Error(ErrorKind::Config, "proposal kind does not match kernel kind");
  if (coupling.kind == CouplingKind::SyncPcnMix && kind != KernelKind::Pcn) {
    throw Error(ErrorKind::Config, "sync-pcn-mix needs the pcn kernel");
  }
  if (!(init_variance_factor >= 0.0)) throw Error(ErrorKind::InvalidArgument, "init variance factor must be >= 0");
}

bool mh_accept_log(double log_gamma_x, double log_gamma_xp, double q_fwd_log, double q_bwd_log, double u) {
  if (!(log_gamma_xp > kNegInf)) return false;
  const double log_alpha = std::min(0.0, (log_gamma_xp + q_bwd_log) - (log_gamma_x + q_fwd_log));
  if (std::isnan(log_alpha)) return false;
  return std::log(u) < log_alpha;
}

Vec mh_accept(const DiscretizedTarget& target, int level, const Vec& x, const Vec& xp, double q_fwd_log,
              double q_bwd_log, double u, CostLedger& ledger) {
  const double lx = eval_log_gamma(target, level, x, ledger);
  if (!(lx > kNegInf)) throw Error(ErrorKind::InvalidCurrentState, "current state has zero density");
  const double lxp = eval_log_gamma(target, level, xp, ledger);
  return mh_accept_log(lx, lxp, q_fwd_log, q_bwd_log, u) ? xp : x;
}

std::pair<Vec, Vec> leapfrog(const DiscretizedTarget& target, int level, const Vec& x0, const Vec& v0, double eps,
                             int steps) {
  if (!target.has_gradient()) throw Error(ErrorKind::HmcUnsupported, target.name() + " provides no gradient");
  return leapfrog([&](const Vec& x) { return target.grad_log_gamma(level, x); }, x0, v0, eps, steps);
}

CoupledKernel::CoupledKernel(TargetPtr target, KernelConfig config)
    : target_(std::move(target)),
      config_(std::move(config)),
      fallback_(GaussianProposal::rwmh_isotropic(target_->dim(), config_.hmc.fallback_scale)) {
  config_.validate(target_->dim());
  if (config_.kind == KernelKind::HmcMix && !target_->has_gradient()) {
    throw Error(ErrorKind::HmcUnsupported, target_->name() + " provides no gradient for hmc-mix");
  }
}

ChainPoint CoupledKernel::make_point(int level, Vec x, CostLedger& ledger) const {
  Density d = eval_density(*target_, level, x, ledger);
  return {std::move(x), std::move(d)};
}

void CoupledKernel::mh_slots(Slot* slots, int count, const Vec* props, double u, CostLedger& ledger) const {
  bool twin[4] = {false, false, false, false};
  for (int j = 1; j < count; j += 2) {
    twin[j] = bitwise_equal(slots[j].point->x, slots[j - 1].point->x) && bitwise_equal(props[j], props[j - 1]);
  }
  for (int j = 0; j < count; ++j) {
    ChainPoint& c = *slots[j].point;
    if (twin[j]) {
      c = *slots[j - 1].point;
      continue;
    }
    if (!c.density.in_support()) throw Error(ErrorKind::InvalidCurrentState, "chain left the support");
    Density dp = eval_density(*target_, slots[j].level, props[j], ledger);
    if (!dp.in_support()) continue;
    const GaussianProposal& q = *slots[j].proposal;
    const double q_fwd = q.log_density(c.x, props[j]);
    const double q_bwd = q.log_density(props[j], c.x);
    if (mh_accept_log(c.density.log_gamma, dp.log_gamma, q_fwd, q_bwd, u)) {
      c.x = props[j];
      c.density = std::move(dp);
    }
  }
}

void CoupledKernel::hmc_slots(Slot* slots, int count, RngStream& stream, CostLedger& ledger) const {
  const HmcSettings& h = config_.hmc;
  const Vec v = sample_std_normal_vec(stream, target_->dim());
  const double log_u = std::log(stream.uniform());
  bool twin[4] = {false, false, false, false};
  for (int j = 1; j < count; j += 2) twin[j] = bitwise_equal(slots[j].point->x, slots[j - 1].point->x);
  const double kinetic0 = 0.5 * v.squaredNorm();
  for (int j = 0; j < count; ++j) {
    ChainPoint& c = *slots[j].point;
    if (twin[j]) {
      c = *slots[j - 1].point;
      continue;
    }
    if (!c.density.in_support()) throw Error(ErrorKind::InvalidCurrentState, "chain left the support");
    auto [xp, vp] = leapfrog(*target_, slots[j].level, c.x, v, h.epsilon, h.steps);
    ledger.charge(target_->level_cost(slots[j].level));
    ledger.count_evaluation();
    if (!xp.allFinite() || !target_->in_support(xp)) continue;
    Density dp = target_->evaluate(slots[j].level, xp);
    if (!dp.in_support()) continue;
    const double h0 = -c.density.log_gamma + kinetic0;
    const double h1 = -dp.log_gamma + 0.5 * vp.squaredNorm();
    const double log_alpha = h0 - h1;
    if (std::isfinite(log_alpha) && log_u <= log_alpha) {
      c.x = std::move(xp);
      c.density = std::move(dp);
    }
  }
}

void CoupledKernel::mh_quad(int level, ChainPoint* c, const GaussianProposal& p_l, const GaussianProposal& p_lm1,
                            const CouplingConfig& coupling, RngStream& stream, CostLedger& ledger) const {
  const QuadPositions z{c[0].x, c[1].x, c[2].x, c[3].x};
  QuadProposalDraw d = couple_quad(coupling, p_l, p_lm1, z, stream);
  const Vec props[4] = {std::move(d.x_l), std::move(d.w_l), std::move(d.x_lm1), std::move(d.w_lm1)};
  Slot slots[4] = {{level, &c[0], &p_l}, {level, &c[1], &p_l}, {level - 1, &c[2], &p_lm1}, {level - 1, &c[3], &p_lm1}};
  mh_slots(slots, 4, props, stream.uniform(), ledger);
}

void CoupledKernel::mh_pair(int level, ChainPoint* c, const GaussianProposal& p, const CouplingConfig& coupling,
                            RngStream& stream, CostLedger& ledger) const {
  PairProposalDraw d = couple_pair(coupling, p, c[0].x, c[1].x, stream);
  const Vec props[2] = {std::move(d.x_prop), std::move(d.w_prop)};
  Slot slots[2] = {{level, &c[0], &p}, {level, &c[1], &p}};
  mh_slots(slots, 2, props, stream.uniform(), ledger);
}

void CoupledKernel::quad_transition(int level, ChainPoint* c, RngStream& stream, CostLedger& ledger) const {
  if (config_.kind == KernelKind::HmcMix) {
    if (stream.uniform() < config_.hmc.kappa) {
      Slot slots[4] = {{level, &c[0], nullptr}, {level, &c[1], nullptr}, {level - 1, &c[2], nullptr},
                       {level - 1, &c[3], nullptr}};
      hmc_slots(slots, 4, stream, ledger);
    } else {
      CouplingConfig fb;
      fb.kind = config_.hmc.fallback_coupling;
      mh_quad(level, c, fallback_, fallback_, fb, stream, ledger);
    }
    return;
  }
  mh_quad(level, c, config_.proposals.at(level), config_.proposals.at(level - 1), config_.coupling, stream, ledger);
}

void CoupledKernel::step_single(int level, ChainPoint& p, RngStream& stream, CostLedger& ledger) const {
  if (config_.kind == KernelKind::HmcMix) {
    if (stream.uniform() < config_.hmc.kappa) {
      Slot slot{level, &p, nullptr};
      hmc_slots(&slot, 1, stream, ledger);
    } else {
      const Vec prop = fallback_.propose(p.x, stream);
      Slot slot{level, &p, &fallback_};
      mh_slots(&slot, 1, &prop, stream.uniform(), ledger);
    }
    return;
  }
  const GaussianProposal& q = config_.proposals.at(level);
  const Vec prop = q.propose(p.x, stream);
  Slot slot{level, &p, &q};
  mh_slots(&slot, 1, &prop, stream.uniform(), ledger);
}

namespace {

void mark_meeting(PairState& s, long n) {
  if (!s.met_at && bitwise_equal(s.x.x, s.w.x)) s.met_at = n;
}

}  // namespace

void CoupledKernel::step_pair(int level, PairState& s, long n, RngStream& stream, CostLedger& ledger) const {
  ChainPoint c[2] = {std::move(s.x), std::move(s.w)};
  if (config_.kind == KernelKind::HmcMix) {
    if (stream.uniform() < config_.hmc.kappa) {
      Slot slots[2] = {{level, &c[0], nullptr}, {level, &c[1], nullptr}};
      hmc_slots(slots, 2, stream, ledger);
    } else {
      CouplingConfig fb;
      fb.kind = config_.hmc.fallback_coupling;
      mh_pair(level, c, fallback_, fb, stream, ledger);
    }
  } else {
    mh_pair(level, c, config_.proposals.at(level), config_.coupling, stream, ledger);
  }
  s.x = std::move(c[0]);
  s.w = std::move(c[1]);
  mark_meeting(s, n);
}

void CoupledKernel::step_quad(int level, QuadState& z, RngStream& stream, CostLedger& ledger) const {
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "quad kernel needs level >= 1");
  ChainPoint c[4] = {std::move(z.upper.x), std::move(z.upper.w), std::move(z.lower.x), std::move(z.lower.w)};
  quad_transition(level, c, stream, ledger);
  z.upper.x = std::move(c[0]);
  z.upper.w = std::move(c[1]);
  z.lower.x = std::move(c[2]);
  z.lower.w = std::move(c[3]);
  ++z.n;
  mark_meeting(z.upper, z.n);
  mark_meeting(z.lower, z.n);
}

namespace {

ChainPoint initial_point(const CoupledKernel& k, int level, RngStream& stream, CostLedger& ledger) {
  ChainPoint p = k.make_point(level, k.target().sample_initial(level, stream), ledger);
  if (!p.density.in_support()) {
    throw Error(ErrorKind::InitializerFailure, "initializer produced a state with zero density");
  }
  return p;
}

}  // namespace

PairState CoupledKernel::initial_pair(int level, RngStream& stream, CostLedger& ledger) const {
  PairState s;
  s.x = initial_point(*this, level, stream, ledger);
  s.w = initial_point(*this, level, stream, ledger);
  step_single(level, s.x, stream, ledger);
  return s;
}

ChainPoint CoupledKernel::perturb_up(int level, const Vec& x, RngStream& stream, CostLedger& ledger) const {
  const double sd = std::sqrt(config_.init_variance_factor * std::ldexp(1.0, -(2 * level + 1)));
  const Vec scale = target_->init_scale();
  for (long it = 0; it < kRejectionCap; ++it) {
    Vec y = x + sd * scale.cwiseProduct(sample_std_normal_vec(stream, target_->dim()));
    if (!target_->in_support(y)) continue;
    ChainPoint p = make_point(level, std::move(y), ledger);
    if (p.density.in_support()) return p;
  }
  throw Error(ErrorKind::InitializerFailure, "cross-level perturbation kept leaving the support");
}

QuadState CoupledKernel::initial_quad(int level, RngStream& stream, CostLedger& ledger) const {
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "quad initialisation needs level >= 1");
  const ChainPoint x_lo = initial_point(*this, level - 1, stream, ledger);
  const ChainPoint w_lo = initial_point(*this, level - 1, stream, ledger);
  ChainPoint x_up = perturb_up(level, x_lo.x, stream, ledger);
  ChainPoint w_up = perturb_up(level, w_lo.x, stream, ledger);

  // one cross-level transition on (x_l, x_lm1), each duplicated so the W slots
  // ride along for free
  ChainPoint c[4] = {x_up, x_up, x_lo, x_lo};
  quad_transition(level, c, stream, ledger);

  QuadState z;
  z.upper.x = std::move(c[0]);
  z.upper.w = std::move(w_up);
  z.lower.x = std::move(c[2]);
  z.lower.w = w_lo;
  z.n = 0;
  return z;
}

}  // namespace ubmc
