// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaintrick/char_poly.hpp"
#include "chaintrick/model.hpp"
#include "chaintrick/polynomial.hpp"

namespace chaintrick {

enum class BifurcationParameter { T, g, alpha };
std::string_view to_string(BifurcationParameter p);

/// Direction of the pair's motion as the parameter increases.
enum class Crossing {
  Destabilizing,  // left half-plane to right half-plane
  Stabilizing,    // right half-plane to left half-plane
};
std::string_view to_string(Crossing c);

struct HopfPoint {
  BifurcationParameter parameter = BifurcationParameter::T;
  double value = 0.0;
  double omega = 0.0;
  Crossing crossing = Crossing::Destabilizing;
  /// Re(dλ/dparameter) of the crossing pair at the critical value.
  double transversality = 0.0;
  /// Set only after an empirical cycle check (see simulator.hpp).
  std::optional<bool> supercritical;
};

/// Returns a copy of p with the named parameter replaced.
MacroParams with_parameter(MacroParams p, BifurcationParameter which, double value);
double get_parameter(const MacroParams& p, BifurcationParameter which);

/// Jacobian of the chain system at its fixed point; throws like equilibrium().
Eigen::MatrixXd equilibrium_jacobian(const MacroParams& p, const InvestmentParams& inv);

/// Eigenvalue census at an equilibrium.
struct EigenSignature {
  bool valid = true;  // false when no positive equilibrium exists
  int negative_real = 0;
  int positive_real = 0;
  int pairs_negative = 0;
  int pairs_positive = 0;

  int pairs() const { return pairs_negative + pairs_positive; }
  bool stable() const { return valid && positive_real == 0 && pairs_positive == 0; }
  /// e.g. "1 negative, pair with positive real part".
  std::string describe() const;
  bool operator==(const EigenSignature&) const = default;
};

EigenSignature signature_of(const std::vector<Complex>& eigs);
EigenSignature eigen_signature(const MacroParams& p, const InvestmentParams& inv);

struct StabilityReport {
  Equilibrium equilibrium;
  /// Monic characteristic polynomial, leading 1 first.
  std::vector<double> monic;
  StabilityVerdict verdict;
  EigenSignature signature;
  /// Cubic discriminant (m = 1 only).
  std::optional<double> discriminant;
};

/// Routh–Hurwitz verdict from the closed-form coefficients for m <= 2 and
/// from the Jacobian's characteristic polynomial otherwise.
StabilityReport assess_stability(const MacroParams& p, const InvestmentParams& inv);

/// Closed-form Hopf points in T for the weak kernel: positive roots of
/// (AB)T² + (A² + αIk*Iy*)T - A with ω* = sqrt(a2(T*)).
/// Throws NoStableRegime when A >= 0 and NoHopf when no positive root exists.
std::vector<HopfPoint> hopf_in_T_m1(const Equilibrium& eq, const MacroParams& p);

/// Closed-form Hopf points in T for the strong kernel: positive roots of φ(T)
/// with ω* = sqrt(a3/a1). Throws NoHopf or DegenerateTransversality.
std::vector<HopfPoint> hopf_in_T_m2(const Equilibrium& eq, const MacroParams& p);

struct ScanOptions {
  int grid_points = 2048;
  /// Bisection stops once the bracket is narrower than this (absolute).
  double tolerance = 1e-9;
  /// Geometric spacing of the grid (suited to T, which spans decades).
  bool log_spacing = false;
};

/// Eigenvalue-tracking route for any m: complex-pair crossings of the
/// imaginary axis for T in [T_lo, T_hi]. Throws NoHopf when none is found.
std::vector<HopfPoint> hopf_in_T_numeric(const MacroParams& p, const InvestmentParams& inv,
                                         double T_lo, double T_hi, ScanOptions options = {
                                             2048, 1e-12, true});

/// Closed form for m <= 2, eigenvalue tracking over T in (1e-3, 200) otherwise.
std::vector<HopfPoint> hopf_in_T(const MacroParams& p, const InvestmentParams& inv);

/// Smallest destabilizing Hopf delay, or nullopt when there is none.
std::optional<double> critical_delay(const MacroParams& p, const InvestmentParams& inv);

enum class BoundaryKind {
  EquilibriumBoundary,    // the fixed point leaves the positive quadrant
  RealCrossing,           // a real eigenvalue changes sign
  RealComplexTransition,  // discriminant sign change
  Hopf,
};
std::string_view to_string(BoundaryKind k);

struct GBoundary {
  double g = 0.0;
  BoundaryKind kind = BoundaryKind::Hopf;
  std::optional<HopfPoint> hopf;
};

struct GSubinterval {
  double lo = 0.0;
  double hi = 0.0;
  EigenSignature signature;
};

struct GIntervalReport {
  double g_min = 0.0;
  double g_max = 0.0;
  std::vector<GBoundary> boundaries;
  std::vector<GSubinterval> classification;

  std::vector<HopfPoint> hopf_points() const;
};

/// Scans g over (c - δ, c + d - δ) with `grid_points` samples and refines
/// every change of the eigenvalue signature by bisection.
GIntervalReport hopf_in_g(const MacroParams& p, const InvestmentParams& inv, int m,
                          ScanOptions options = {});

/// Complex-pair crossings as α varies over [alpha_lo, alpha_hi]; throws NoHopf.
std::vector<HopfPoint> hopf_in_alpha(const MacroParams& p, const InvestmentParams& inv, int m,
                                     double alpha_lo, double alpha_hi,
                                     ScanOptions options = {});

/// Central-difference Re(dλ/dparameter) of the pair nearest i·omega.
double transversality_fd(const MacroParams& p, const InvestmentParams& inv,
                         BifurcationParameter which, double value, double omega,
                         double step);

}  // namespace chaintrick
