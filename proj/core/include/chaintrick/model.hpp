// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

namespace chaintrick {

/// Logistic investment intensity Φ(x) = c + d / (1 + exp(-a(vx - 1))).
/// Defaults are the Dana–Malgrange estimates for the French economy.
struct InvestmentParams {
  double a = 9.0;    // slope
  double c = 0.01;   // minimum investment rate
  double d = 0.026;  // investment range
  double v = 4.23;   // output-capital sensitivity

  void validate() const;
};

struct MacroParams {
  double alpha = 1.0;   // adjustment speed
  double gamma = 0.15;  // propensity
  double delta = 0.007; // depreciation
  double g = 0.016;     // growth rate
  double G0 = 2.0;      // autonomous expenditure
  double T = 1.0;       // mean delay
  int m = 1;            // gamma kernel order

  /// Checks alpha, gamma, delta, G0 > 0, T >= 0 and m >= 1.
  void validate() const;
  /// validate() plus T > 0, required by every stability operation.
  void validate_for_stability() const;
};

struct Equilibrium {
  double x_star = 0.0;
  double y_star = 0.0;
  double k_star = 0.0;
  double Iy_star = 0.0;
  double Ik_star = 0.0;

  /// x* at or past the logistic midpoint 1/v. Flagged, not rejected.
  bool above_midpoint = false;
};

struct InvestmentDerivs {
  double Iy = 0.0;
  double Ik = 0.0;
};

double phi(double x, const InvestmentParams& inv);

/// Φ'(x) = a d v s (1 - s) with s the logistic sigmoid; finite for all x.
double phi_prime(double x, const InvestmentParams& inv);

/// I(y, k) = k Φ(y / k).
double investment(double y, double k, const InvestmentParams& inv);

/// Open interval (c - δ, c + d - δ) of growth rates admitting an equilibrium.
std::pair<double, double> admissible_growth(const InvestmentParams& inv, double delta);

/// Closed-form inverse of the logistic: Φ(x*) = g + δ.
/// Throws GrowthOutOfRange unless c < g + δ < c + d.
double solve_x_star(const InvestmentParams& inv, double g, double delta);

InvestmentDerivs investment_derivs(double x_star, const InvestmentParams& inv, double g,
                                   double delta);

/// Fixed point with positive coordinates, k* = αG0 / (gx* + α(γx* - (g+δ))).
/// Throws GrowthOutOfRange or NonPositiveEquilibrium.
Equilibrium equilibrium(const MacroParams& p, const InvestmentParams& inv);

}  // namespace chaintrick
