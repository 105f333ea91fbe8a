// SPDX-License-Identifier: Apache-2.0
#include "ubmc/rng.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "ubmc/error.hpp"

namespace ubmc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

bool bitwise_equal(const Vec& a, const Vec& b) noexcept {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

RngStream::RngStream(const SeedSpec& spec)
    : key_{static_cast<std::uint32_t>(spec.root_seed),
           static_cast<std::uint32_t>(spec.root_seed >> 32)},
      counter_hi_((spec.replicate_id << 8) | static_cast<std::uint64_t>(spec.stream_tag)) {}

void RngStream::refill() {
  block_ = philox4x32_10({static_cast<std::uint32_t>(counter_lo_),
                          static_cast<std::uint32_t>(counter_lo_ >> 32),
                          static_cast<std::uint32_t>(counter_hi_),
                          static_cast<std::uint32_t>(counter_hi_ >> 32)},
                         key_);
  ++counter_lo_;
  block_pos_ = 0;
}

RngStream::result_type RngStream::operator()() {
  if (block_pos_ > 2) refill();
  const std::uint64_t lo = block_[block_pos_];
  const std::uint64_t hi = block_[block_pos_ + 1];
  block_pos_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  has_cached_normal_ = true;
  return r * std::cos(angle);
}

RngStream derive_stream(const SeedSpec& spec) { return RngStream(spec); }

Vec sample_std_normal_vec(RngStream& stream, int d) {
  if (d <= 0 || d > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "normal vector dimension must be in [1, " +
                                                 std::to_string(kMaxDim) + "], got " +
                                                 std::to_string(d));
  }
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = stream.normal();
  return v;
}

}  // namespace ubmc
