// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chaintrick {

enum class ErrorCode {
  InvalidParameter,
  GrowthOutOfRange,
  NonPositiveEquilibrium,
  DelayNonPositive,
  KernelOrderInvalid,
  CapitalNonPositive,
  NoStableRegime,
  NoHopf,
  DegenerateTransversality,
  StepFailure,
  InsufficientOscillations,
  RootResidual,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain errors reject inputs that violate a model precondition; everything
/// else is a numeric failure (the CLI maps these to exit codes 2 and 3).
bool is_domain_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chaintrick
