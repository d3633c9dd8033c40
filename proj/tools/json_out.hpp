// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include <json.hpp>

namespace chaintrick::cli {

using Json = nlohmann::ordered_json;

/// Pretty JSON with every floating-point value at 17 significant digits.
void write_json(std::ostream& os, const Json& j);

/// One `path = value` line per leaf, in document order.
void write_text(std::ostream& os, const Json& j);

}  // namespace chaintrick::cli
