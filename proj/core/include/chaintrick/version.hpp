// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace chaintrick {

inline constexpr const char* kVersion = "0.1.0";
/// Bumped whenever the layout of config or sidecar JSON changes.
inline constexpr int kConfigVersion = 1;

}  // namespace chaintrick
