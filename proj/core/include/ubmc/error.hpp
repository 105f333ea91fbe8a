// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ubmc {

enum class ErrorKind {
  InvalidArgument,
  InvalidDimension,
  LevelTooLarge,
  CapExceeded,
  CouplingStall,
  InvalidCurrentState,
  HmcUnsupported,
  LostCoercivity,
  IntegratorBlowUp,
  InitializerFailure,
  StopCapExceeded,
  NonFiniteGradient,
  EmptyInput,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ubmc
