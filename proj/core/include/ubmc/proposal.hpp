// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "ubmc/rng.hpp"
#include "ubmc/types.hpp"

namespace ubmc {

enum class ProposalKind { Rwmh, Pcn };

/// Gaussian MH proposal X' = mu(x) + L v with v ~ N(0, I).
///
/// RWMH: mu(x) = x, L = sigma. pCN: mu(x) = rho x, L = sqrt(1 - rho^2) sigma.
/// sigma must be lower triangular with a positive diagonal.
class GaussianProposal {
 public:
  static GaussianProposal rwmh(const Mat& sigma);
  static GaussianProposal pcn(double rho, const Mat& sigma);
  static GaussianProposal rwmh_isotropic(int dim, double scale);
  static GaussianProposal pcn_isotropic(int dim, double rho, double scale);

  ProposalKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(factor_.rows()); }
  double rho() const noexcept { return rho_; }
  const Mat& sigma() const noexcept { return sigma_; }
  /// Cholesky factor of the proposal covariance.
  const Mat& factor() const noexcept { return factor_; }

  Vec mean(const Vec& x) const;
  Vec propose(const Vec& x, RngStream& stream) const;
  Vec propose_with(const Vec& x, const Vec& v) const;
  /// Exact log q(x, xp).
  double log_density(const Vec& x, const Vec& xp) const;
  /// factor^{-1} d by forward substitution.
  Vec whiten(const Vec& d) const;

 private:
  GaussianProposal(ProposalKind kind, double rho, const Mat& sigma);

  ProposalKind kind_;
  double rho_;
  Mat sigma_;
  Mat factor_;
  double log_norm_;
};

/// A default proposal plus optional per-level overrides.
class ProposalLadder {
 public:
  explicit ProposalLadder(GaussianProposal base) : base_(std::move(base)) {}

  void set_override(int level, GaussianProposal p) { overrides_.insert_or_assign(level, std::move(p)); }
  const GaussianProposal& at(int level) const;

 private:
  GaussianProposal base_;
  std::map<int, GaussianProposal> overrides_;
};

}  // namespace ubmc
