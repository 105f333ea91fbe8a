// SPDX-License-Identifier: Apache-2.0
#include "ubmc/proposal.hpp"

#include <cmath>
#include <numbers>

#include "ubmc/error.hpp"

namespace ubmc {

GaussianProposal::GaussianProposal(ProposalKind kind, double rho, const Mat& sigma)
    : kind_(kind), rho_(rho), sigma_(sigma) {
  const auto d = sigma.rows();
  if (d < 1 || d > kMaxDim || sigma.cols() != d) {
    throw Error(ErrorKind::InvalidDimension, "proposal factor must be square with dimension in [1, 6]");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(sigma(i, i) > 0.0) || !std::isfinite(sigma(i, i))) {
      throw Error(ErrorKind::InvalidArgument, "proposal factor needs a positive finite diagonal");
    }
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (sigma(i, j) != 0.0) throw Error(ErrorKind::InvalidArgument, "proposal factor must be lower triangular");
    }
  }
  if (kind == ProposalKind::Pcn) {
    if (!(rho > -1.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "pCN rho must lie in (-1, 1)");
    factor_ = std::sqrt(1.0 - rho * rho) * sigma;
  } else {
    factor_ = sigma;
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det += std::log(factor_(i, i));
  log_norm_ = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - log_det;
}

GaussianProposal GaussianProposal::rwmh(const Mat& sigma) { return {ProposalKind::Rwmh, 0.0, sigma}; }

GaussianProposal GaussianProposal::pcn(double rho, const Mat& sigma) { return {ProposalKind::Pcn, rho, sigma}; }

GaussianProposal GaussianProposal::rwmh_isotropic(int dim, double scale) {
  return rwmh(scale * Mat::Identity(dim, dim));
}

GaussianProposal GaussianProposal::pcn_isotropic(int dim, double rho, double scale) {
  return pcn(rho, scale * Mat::Identity(dim, dim));
}

Vec GaussianProposal::mean(const Vec& x) const {
  if (kind_ == ProposalKind::Pcn) return rho_ * x;
  return x;
}

Vec GaussianProposal::propose_with(const Vec& x, const Vec& v) const {
  Vec out = mean(x);
  out.noalias() += factor_.triangularView<Eigen::Lower>() * v;
  return out;
}

Vec GaussianProposal::propose(const Vec& x, RngStream& stream) const {
  return propose_with(x, sample_std_normal_vec(stream, dim()));
}

Vec GaussianProposal::whiten(const Vec& d) const {
  return factor_.triangularView<Eigen::Lower>().solve(d);
}

double GaussianProposal::log_density(const Vec& x, const Vec& xp) const {
  const Vec z = whiten(xp - mean(x));
  return log_norm_ - 0.5 * z.squaredNorm();
}

const GaussianProposal& ProposalLadder::at(int level) const {
  const auto it = overrides_.find(level);
  return it == overrides_.end() ? base_ : it->second;
}

}  // namespace ubmc
