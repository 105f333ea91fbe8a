// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "ubmc/types.hpp"

namespace ubmc {

enum class StreamTag : std::uint8_t { LevelSampler = 0, Chain = 1, Coupling = 2, Init = 3 };

struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::uint64_t replicate_id = 0;
  StreamTag stream_tag = StreamTag::Chain;
};

/// Counter-based stream built on Philox4x32-10.
///
/// The key is the root seed; the upper 64 counter bits encode (replicate_id,
/// stream_tag) and the lower 64 bits advance with each block. Distinct seed
/// specs therefore walk disjoint counter ranges under one key, so streams never
/// share state and can be created on any worker in any order.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(const SeedSpec& spec);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the paired variate is cached.
  double normal();

  std::uint64_t blocks_used() const noexcept { return counter_lo_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t counter_hi_ = 0;
  std::uint64_t counter_lo_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

RngStream derive_stream(const SeedSpec& spec);

/// d i.i.d. standard normals; d = 0 raises InvalidDimension.
Vec sample_std_normal_vec(RngStream& stream, int d);

/// Raw Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace ubmc
