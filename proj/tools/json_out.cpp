// SPDX-License-Identifier: Apache-2.0

#include "json_out.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace chaintrick::cli {

namespace {

std::string scalar(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    return std::isfinite(v) ? fmt::format("{:.17g}", v) : "null";
  }
  return j.dump();
}

void emit(std::ostream& os, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(key).dump() << ": ";
      emit(os, value, depth + 1);
    }
    os << '\n' << close << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) os << ",\n";
      os << pad;
      emit(os, j[i], depth + 1);
    }
    os << '\n' << close << ']';
  } else {
    os << scalar(j);
  }
}

void flatten(std::ostream& os, const Json& j, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(os, value, path.empty() ? key : path + "." + key);
    }
  } else if (j.is_array()) {
    if (j.empty()) os << path << " = []\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(os, j[i], path + "[" + std::to_string(i) + "]");
    }
  } else if (j.is_string()) {
    os << path << " = " << j.get<std::string>() << '\n';
  } else {
    os << path << " = " << scalar(j) << '\n';
  }
}

}  // namespace

void write_json(std::ostream& os, const Json& j) {
  emit(os, j, 0);
  os << '\n';
}

void write_text(std::ostream& os, const Json& j) { flatten(os, j, ""); }

}  // namespace chaintrick::cli
