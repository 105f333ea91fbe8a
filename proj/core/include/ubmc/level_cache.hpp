// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>

#include "ubmc/error.hpp"

namespace ubmc {

/// Per-level precomputation built on first use, safe under concurrent readers.
template <typename T, int MaxLevel = 31>
class LevelCache {
 public:
  using Builder = std::function<T(int)>;

  explicit LevelCache(Builder build) : build_(std::move(build)) {}

  const T& get(int level) const {
    if (level < 0 || level >= MaxLevel) throw Error(ErrorKind::LevelTooLarge, "level outside the cache range");
    auto& slot = slots_[static_cast<std::size_t>(level)];
    std::call_once(slot.once, [&] { slot.value = std::make_unique<T>(build_(level)); });
    return *slot.value;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::unique_ptr<T> value;
  };

  Builder build_;
  mutable std::array<Slot, MaxLevel> slots_;
};

}  // namespace ubmc
