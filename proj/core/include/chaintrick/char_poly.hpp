// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "chaintrick/model.hpp"
#include "chaintrick/polynomial.hpp"

namespace chaintrick {

/// A Routh–Hurwitz expression within this distance of zero is marginal.
inline constexpr double kMarginalTolerance = 1e-8;

/// λ³ + a1 λ² + a2 λ + a3 for the weak kernel (m = 1):
///   a1 = 1/T - A,  a2 = -A/T - B,  a3 = (-B - αIk*Iy*)/T
///   A  = α(Iy* - γ) - g - x*Iy*,   B = [α(Iy* - γ) - g] x*Iy*
struct CharCoeffsM1 {
  double T = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double A = 0.0, B = 0.0;
  double alpha_Ik_Iy = 0.0;  // αIk*Iy*

  /// Same constants A, B evaluated at another delay.
  CharCoeffsM1 at(double delay) const;
  std::array<double, 4> monic() const { return {1.0, a1, a2, a3}; }
  /// a1'(T), a2'(T), a3'(T).
  std::array<double, 3> derivatives() const;
};

/// λ⁴ + a1 λ³ + a2 λ² + a3 λ + a4 for the strong kernel (m = 2):
///   M = α(Iy* - γ) - g,  N = Ik* - (g+δ) = -x*Iy*,  P = -αIk*Iy*
struct CharCoeffsM2 {
  double T = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double M = 0.0, N = 0.0, P = 0.0;

  CharCoeffsM2 at(double delay) const;
  std::array<double, 5> monic() const { return {1.0, a1, a2, a3, a4}; }
  std::array<double, 4> derivatives() const;
};

CharCoeffsM1 coeffs_m1(const Equilibrium& eq, const MacroParams& p);
CharCoeffsM2 coeffs_m2(const Equilibrium& eq, const MacroParams& p);

struct Condition {
  std::string name;
  double value = 0.0;
  bool satisfied = false;
  bool marginal = false;
};

struct StabilityVerdict {
  bool stable = false;
  /// Some Routh–Hurwitz expression is within kMarginalTolerance of zero.
  bool marginal = false;
  /// The Hurwitz determinant that vanishes at a Hopf point is marginal.
  bool hopf_condition = false;
  std::vector<Condition> conditions;
  /// Informational sign tests (not part of the verdict).
  std::vector<Condition> side_conditions;
  std::vector<Complex> eigenvalues;
};

/// a1 > 0, a3 > 0, a1 a2 > a3. Side conditions report the signs of B and
/// B + αIk*Iy* (a3 > 0 iff the latter is negative).
StabilityVerdict routh_hurwitz_cubic(const CharCoeffsM1& c);

/// a1 > 0, a3 > 0, a4 > 0, a1 a2 a3 > a3² + a1² a4. Side conditions report
/// M + N < 0, MN + P > 0 and, for M > 0, T < (M + N)/(MN).
StabilityVerdict routh_hurwitz_quartic(const CharCoeffsM2& c);

/// Verdict from the Hurwitz minors of any monic polynomial; used for m >= 3.
StabilityVerdict routh_hurwitz_general(std::span<const double> monic);

/// Standard discriminant of λ³ + a1 λ² + a2 λ + a3.
double cubic_discriminant(double a1, double a2, double a3);
double cubic_discriminant(const CharCoeffsM1& c);

/// a1 a2 - a3, numerator (AB)T² + (A² + αIk*Iy*)T - A over T².
double hurwitz_m1(const CharCoeffsM1& c);
/// Coefficients of (AB)T² + (A² + αIk*Iy*)T - A, descending.
std::array<double, 3> criticality_quadratic(const CharCoeffsM1& c);

/// D(T) = a1 a2 a3 - a3² - a1² a4.
double hurwitz_m2(const CharCoeffsM2& c);
/// dD/dT assembled from a_i and a_i'(T).
double hurwitz_m2_deriv(const CharCoeffsM2& c);

/// Descending coefficients of the criticality quartic φ(T); with s = M+N,
/// q = MN: [s q², s²(P - 4q), 4s(s² + 2q - 2P), 16(P - s²), 16s].
/// φ(T) = -(T⁵/4) D(T), so φ < 0 exactly when the last Hurwitz condition holds.
std::array<double, 5> phi_quartic_coefficients(const CharCoeffsM2& c);
double phi_quartic(const CharCoeffsM2& c, double T);
double phi_quartic_deriv(const CharCoeffsM2& c, double T);

}  // namespace chaintrick
