// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chaintrick/hopf.hpp"
#include "chaintrick/model.hpp"

namespace chaintrick {

/// Inclusive, evenly spaced range of one parameter.
struct Axis {
  BifurcationParameter parameter = BifurcationParameter::alpha;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  std::vector<double> values() const;
  void validate(const MacroParams& base, const InvestmentParams& inv) const;
};

struct SweepOptions {
  /// Worker threads; 0 reads CHAINTRICK_THREADS, then falls back to the
  /// hardware concurrency.
  unsigned threads = 0;
};

/// Resolves SweepOptions::threads to a positive count.
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on a small pool. Exceptions are rethrown
/// on the caller's thread (lowest index first).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads);

struct CurvePoint {
  double parameter = 0.0;
  std::optional<double> T_bi;  // empty when there is no Hopf point
};

struct CurveFit {
  std::string model;  // "c0 + c1/alpha" or "a0 + a1*g + a2*g^2"
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  /// residual_norm / ||T_bi||
  double relative_residual = 0.0;
  std::size_t points_used = 0;
};

struct BifurcationCurve {
  Axis axis;
  MacroParams fixed;
  std::vector<CurvePoint> points;
  std::optional<CurveFit> fit;
  /// Parameter value where the fitted T_bi reaches zero (alpha curve only).
  std::optional<double> zero_crossing;
};

/// Ordinary least squares of y against the given basis functions.
CurveFit fit_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<std::function<double(double)>>& basis,
                           std::string model);

/// T_bi(α) at fixed g and m, fitted by c0 + c1/α.
BifurcationCurve curve_T_vs_alpha(const MacroParams& base, const InvestmentParams& inv,
                                  const Axis& alpha, const SweepOptions& options = {});

/// T_bi(g) at fixed α and m, fitted by a quadratic. Grid points on or beyond
/// the admissible g bounds are excluded.
BifurcationCurve curve_T_vs_g(const MacroParams& base, const InvestmentParams& inv,
                              const Axis& g, const SweepOptions& options = {});

struct BifurcationSurface {
  Axis alpha;
  Axis g;
  MacroParams fixed;
  /// Row-major: alpha index outer, g index inner.
  std::vector<std::optional<double>> T_bi;

  const std::optional<double>& at(int i_alpha, int j_g) const {
    return T_bi[static_cast<std::size_t>(i_alpha) * static_cast<std::size_t>(g.count) +
                static_cast<std::size_t>(j_g)];
  }
};

/// T_bi over an α×g grid; both axes need at least 16 points.
BifurcationSurface surface_T(const MacroParams& base, const InvestmentParams& inv,
                             const Axis& alpha, const Axis& g,
                             const SweepOptions& options = {});

struct GBifurcationRow {
  int m = 1;
  double g_bi1 = 0.0;
  double g_bi2 = 0.0;
};

/// The two complex-pair Hopf points in g for each kernel order.
std::vector<GBifurcationRow> table_g_bifurcations(const std::vector<int>& orders,
                                                  const MacroParams& base,
                                                  const InvestmentParams& inv,
                                                  const SweepOptions& options = {});

/// `alpha,T_bi` or `g,T_bi`; gaps are written as NA.
void write_curve_csv(std::ostream& os, const BifurcationCurve& curve);
/// `alpha,g,T_bi`
void write_surface_csv(std::ostream& os, const BifurcationSurface& surface);
/// `m,g_bi1,g_bi2`
void write_table_csv(std::ostream& os, const std::vector<GBifurcationRow>& rows);

}  // namespace chaintrick
