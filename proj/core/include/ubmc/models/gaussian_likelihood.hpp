// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

namespace ubmc::detail {

/// log N(y; G x, theta^{-1} I) as a function of the squared residual norm.
inline double gaussian_log_likelihood(double sq_residual, double theta, long p) {
  return 0.5 * static_cast<double>(p) * std::log(theta / (2.0 * std::numbers::pi)) - 0.5 * theta * sq_residual;
}

/// d/dtheta of gaussian_log_likelihood.
inline double gaussian_score(double sq_residual, double theta, long p) {
  return 0.5 * static_cast<double>(p) / theta - 0.5 * sq_residual;
}

}  // namespace ubmc::detail
