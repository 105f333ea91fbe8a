// SPDX-License-Identifier: Apache-2.0
#include "ubmc/error.hpp"

namespace ubmc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::LevelTooLarge: return "level-too-large";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::CouplingStall: return "coupling-stall";
    case ErrorKind::InvalidCurrentState: return "invalid-current-state";
    case ErrorKind::HmcUnsupported: return "hmc-unsupported";
    case ErrorKind::LostCoercivity: return "lost-coercivity";
    case ErrorKind::IntegratorBlowUp: return "integrator-blow-up";
    case ErrorKind::InitializerFailure: return "initializer-failure";
    case ErrorKind::StopCapExceeded: return "stop-cap-exceeded";
    case ErrorKind::NonFiniteGradient: return "non-finite-gradient";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace ubmc
