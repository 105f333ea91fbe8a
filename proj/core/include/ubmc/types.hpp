// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace ubmc {

/// Upper bound on the state and parameter dimension; keeps small vectors on the stack.
inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// True when both vectors hold the same doubles bit for bit (sizes included).
bool bitwise_equal(const Vec& a, const Vec& b) noexcept;

}  // namespace ubmc
