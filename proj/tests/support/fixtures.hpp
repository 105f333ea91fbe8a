// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "ubmc/coupled_kernel.hpp"
#include "ubmc/models/elliptic.hpp"
#include "ubmc/models/sirx.hpp"
#include "ubmc/models/toy.hpp"

namespace ubmc::testing {

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

/// Toy data from x = (2, -2) at precision 1 with the exact forward map.
inline std::shared_ptr<ToyModel> toy_model(double theta = 1.0, std::uint64_t seed = 7) {
  RngStream s = derive_stream({seed, 0, StreamTag::Init});
  Dvec y = ToyModel::generate_data({2.0, -2.0}, 1.0, std::nullopt, s);
  return std::make_shared<ToyModel>(std::move(y), theta);
}

/// Elliptic data from x = (0.6, -0.4) at precision 1, solved at level 10.
inline std::shared_ptr<EllipticModel> elliptic_model(double theta = 1.0, std::uint64_t seed = 7) {
  RngStream s = derive_stream({seed, 0, StreamTag::Init});
  Dvec y = EllipticModel::generate_data(vec2(0.6, -0.4), 1.0, 10, s);
  return std::make_shared<EllipticModel>(std::move(y), theta);
}

/// SIR-X data from x = (0.002, 0.3, 15), theta = (1, 1), at level 8.
inline std::shared_ptr<SirxModel> sirx_model(std::uint64_t seed = 7) {
  RngStream s = derive_stream({seed, 0, StreamTag::Init});
  Vec theta = vec2(1.0, 1.0);
  Dvec y = SirxModel::generate_data(vec3(0.002, 0.3, 15.0), theta, 8, s);
  return std::make_shared<SirxModel>(std::move(y), theta);
}

/// Toy HMC mixture with the reference settings.
inline KernelConfig toy_hmc_config() {
  KernelConfig kc;
  kc.kind = KernelKind::HmcMix;
  kc.proposals = ProposalLadder(GaussianProposal::pcn_isotropic(2, 0.95, 4.0));
  return kc;
}

inline KernelConfig toy_pcn_config(CouplingKind coupling = CouplingKind::ReflectionMax) {
  KernelConfig kc;
  kc.kind = KernelKind::Pcn;
  kc.proposals = ProposalLadder(GaussianProposal::pcn_isotropic(2, 0.95, 4.0));
  kc.coupling.kind = coupling;
  return kc;
}

/// Relative error with an absolute floor, for finite-difference comparisons.
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-8, std::max(std::abs(a), std::abs(b))); }

}  // namespace ubmc::testing
