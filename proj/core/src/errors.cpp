// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/errors.hpp"

namespace chaintrick {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::GrowthOutOfRange: return "GrowthOutOfRange";
    case ErrorCode::NonPositiveEquilibrium: return "NonPositiveEquilibrium";
    case ErrorCode::DelayNonPositive: return "DelayNonPositive";
    case ErrorCode::KernelOrderInvalid: return "KernelOrderInvalid";
    case ErrorCode::CapitalNonPositive: return "CapitalNonPositive";
    case ErrorCode::NoStableRegime: return "NoStableRegime";
    case ErrorCode::NoHopf: return "NoHopf";
    case ErrorCode::DegenerateTransversality: return "DegenerateTransversality";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::InsufficientOscillations: return "InsufficientOscillations";
    case ErrorCode::RootResidual: return "RootResidual";
  }
  return "Unknown";
}

bool is_domain_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::GrowthOutOfRange:
    case ErrorCode::NonPositiveEquilibrium:
    case ErrorCode::DelayNonPositive:
    case ErrorCode::KernelOrderInvalid:
    case ErrorCode::CapitalNonPositive:
      return true;
    default:
      return false;
  }
}

}  // namespace chaintrick
