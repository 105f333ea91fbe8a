// SPDX-License-Identifier: Apache-2.0
// Frozen reference values. Each constant was derived by hand or by an
// independent computation and must not be regenerated from the code under test.
#pragma once

#include <array>
#include <cstdint>

namespace ubmc::oracle {

// Philox4x32-10 known-answer vectors from the Random123 distribution.
struct PhiloxVector {
  std::array<std::uint32_t, 4> counter;
  std::array<std::uint32_t, 2> key;
  std::array<std::uint32_t, 4> output;
};

inline constexpr std::array<PhiloxVector, 3> kPhilox{{
    {{0u, 0u, 0u, 0u}, {0u, 0u}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
    {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
     {0xffffffffu, 0xffffffffu},
     {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
    {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
     {0xa4093822u, 0x299f31d0u},
     {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
}};

// 1 - 2^{-5/2}.
inline constexpr double kMassEta52Level0 = 0.8232233047033631;
// 2 Phi(-1.5): overlap of N(0, 1) and N(3, 1).
inline constexpr double kOverlapN0N3 = 0.13361440253771614;
// -log(2 pi) / 2.
inline constexpr double kLogStdNormalAtZero = -0.9189385332046727;
// pCN, rho = 0.95, sigma = 4, d = 1: variance 16 (1 - 0.9025).
inline constexpr double kPcnVariance = 1.56;

// P1 FEM with trapezoid load for -h'' = sin(k t) on [0, 2 pi], 32 cells:
// nodal values are c_k sin(k t_i) / k^2 with c_k = (k h / 2)^2 / sin^2(k h / 2).
inline constexpr double kFemFactorK1 = 1.0032189644400795;
inline constexpr double kFemFactorK2 = 1.0129507467218792;

// At x = 0 the elliptic coefficient is 0.15, so h(t) = (100 / 0.15) (t - t^3) / 6,
// which P1 elements with this load reproduce exactly at the nodes.
inline double elliptic_exact_at_zero(double t) { return (100.0 / 0.15) * (t - t * t * t) / 6.0; }

// One leapfrog step, eps = 0.1, grad log pi = -x, from (x, v) = (1, 0):
// v_half = -0.05, x1 = 0.995, v1 = -0.05 - 0.05 * 0.995.
inline constexpr double kLeapfrogX1 = 0.995;
inline constexpr double kLeapfrogV1 = -0.09975;

}  // namespace ubmc::oracle
