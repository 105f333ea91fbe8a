// SPDX-License-Identifier: Apache-2.0
#include "ubmc/level_schedule.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ubmc/error.hpp"

namespace ubmc {

double LevelSchedule::delta(int l) const {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "level must be non-negative");
  const int exponent = l + l0;
  // ldexp keeps the halving exact; below ~2^-1022 we would lose it to denormals.
  if (exponent > 1000) {
    throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(l) + " underflows the schedule");
  }
  return std::ldexp(base, -exponent);
}

LevelDistribution::LevelDistribution(double eta, int cap) : eta_(eta), cap_(cap) {
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
  if (cap < 0) throw Error(ErrorKind::InvalidArgument, "level cap must be non-negative");
  ratio_ = std::exp2(-eta);
  log_ratio_ = -eta * std::numbers::ln2;
}

double LevelDistribution::mass(int l) const {
  if (l < 0) return 0.0;
  return (1.0 - ratio_) * std::exp2(-eta_ * l);
}

double LevelDistribution::survival(int l) const {
  if (l <= 0) return 1.0;
  return std::exp2(-eta_ * l);
}

double LevelDistribution::cap_event_probability() const { return std::exp2(-eta_ * (cap_ + 1)); }

int LevelDistribution::level_for_uniform(double u) const {
  // P(L >= l) = P(U <= r^l), so L = floor(log(U) / log r) for U in (0, 1].
  if (!(u > 0.0) || u > 1.0) throw Error(ErrorKind::InvalidArgument, "uniform must lie in (0, 1]");
  if (u == 1.0 || std::isinf(log_ratio_)) return 0;
  const double x = std::log(u) / log_ratio_;
  if (x > static_cast<double>(cap_)) {
    throw Error(ErrorKind::CapExceeded,
                "sampled level exceeds cap " + std::to_string(cap_) + " (event probability " +
                    std::to_string(cap_event_probability()) + ")");
  }
  return static_cast<int>(std::floor(x));
}

int LevelDistribution::sample(RngStream& stream) const { return level_for_uniform(1.0 - stream.uniform()); }

}  // namespace ubmc
