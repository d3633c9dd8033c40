// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chaintrick/model.hpp"

namespace chaintrick::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDomainError = 2,
  kNumericFailure = 3,
};

/// Everything a command needs; serializable as the `--config` file.
struct RunConfig {
  std::string command;
  InvestmentParams investment;
  MacroParams macro;

  // stability
  int g_scan = 0;
  // hopf
  std::string vary = "T";
  bool check_cycles = false;
  // simulate
  double horizon = 3000.0;
  double y0 = 15.0;
  double k0 = 100.0;
  double sample = 0.1;
  double rtol = 1e-9;
  double atol = 1e-11;
  double transient = 0.5;
  // sweep, and the alpha search range of `hopf --vary alpha`
  std::string curve = "T-vs-alpha";
  double alpha_lo = 0.6;
  double alpha_hi = 0.764;
  int alpha_count = 30;
  double g_lo = 0.01;
  double g_hi = 0.02;
  int g_count = 41;
  // table2
  std::vector<int> orders{1, 2, 3, 4};
};

/// Runs one invocation; `argv[0]` is the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaintrick::cli
