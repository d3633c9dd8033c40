// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/char_poly.hpp"

#include <cmath>

#include "chaintrick/errors.hpp"

namespace chaintrick {

namespace {

void require_delay(double T) {
  if (!(T > 0.0)) throw Error(ErrorCode::DelayNonPositive, "mean delay T must be > 0");
}

Condition make_condition(std::string name, double value) {
  Condition c{std::move(name), value, value > kMarginalTolerance, false};
  c.marginal = std::abs(value) <= kMarginalTolerance;
  return c;
}

Condition sign_test(std::string name, double value, bool satisfied) {
  return Condition{std::move(name), value, satisfied, false};
}

void finish(StabilityVerdict& v, std::span<const double> monic, std::size_t hopf_index) {
  v.stable = true;
  for (const auto& c : v.conditions) {
    v.marginal = v.marginal || c.marginal;
    v.stable = v.stable && c.satisfied;
  }
  v.stable = v.stable && !v.marginal;
  v.hopf_condition = hopf_index < v.conditions.size() && v.conditions[hopf_index].marginal;
  v.eigenvalues = polynomial_roots(monic);
}

}  // namespace

CharCoeffsM1 CharCoeffsM1::at(double delay) const {
  require_delay(delay);
  CharCoeffsM1 c = *this;
  c.T = delay;
  c.a1 = 1.0 / delay - A;
  c.a2 = -A / delay - B;
  c.a3 = (-B - alpha_Ik_Iy) / delay;
  return c;
}

std::array<double, 3> CharCoeffsM1::derivatives() const {
  const double T2 = T * T;
  return {-1.0 / T2, A / T2, -a3 / T};
}

CharCoeffsM2 CharCoeffsM2::at(double delay) const {
  require_delay(delay);
  CharCoeffsM2 c = *this;
  const double s = M + N;
  const double q = M * N;
  c.T = delay;
  c.a1 = 4.0 / delay - s;
  c.a2 = 4.0 / (delay * delay) - 4.0 * s / delay + q;
  c.a3 = 4.0 / delay * (q - s / delay);
  c.a4 = 4.0 * (q + P) / (delay * delay);
  return c;
}

std::array<double, 4> CharCoeffsM2::derivatives() const {
  const double s = M + N;
  const double q = M * N;
  const double T2 = T * T;
  const double T3 = T2 * T;
  return {-4.0 / T2, -8.0 / T3 + 4.0 * s / T2, -4.0 * q / T2 + 8.0 * s / T3,
          -8.0 * (q + P) / T3};
}

CharCoeffsM1 coeffs_m1(const Equilibrium& eq, const MacroParams& p) {
  require_delay(p.T);
  CharCoeffsM1 c;
  const double base = p.alpha * (eq.Iy_star - p.gamma) - p.g;
  const double xI = eq.x_star * eq.Iy_star;
  c.A = base - xI;
  c.B = base * xI;
  c.alpha_Ik_Iy = p.alpha * eq.Ik_star * eq.Iy_star;
  return c.at(p.T);
}

CharCoeffsM2 coeffs_m2(const Equilibrium& eq, const MacroParams& p) {
  require_delay(p.T);
  CharCoeffsM2 c;
  c.M = p.alpha * (eq.Iy_star - p.gamma) - p.g;
  c.N = eq.Ik_star - (p.g + p.delta);
  c.P = -p.alpha * eq.Ik_star * eq.Iy_star;
  return c.at(p.T);
}

StabilityVerdict routh_hurwitz_cubic(const CharCoeffsM1& c) {
  StabilityVerdict v;
  v.conditions.push_back(make_condition("a1 > 0", c.a1));
  v.conditions.push_back(make_condition("a3 > 0", c.a3));
  v.conditions.push_back(make_condition("a1*a2 - a3 > 0", hurwitz_m1(c)));
  v.side_conditions.push_back(sign_test("A < 0", c.A, c.A < 0.0));
  v.side_conditions.push_back(sign_test("B", c.B, c.B > 0.0));
  const double a3_criterion = c.B + c.alpha_Ik_Iy;
  v.side_conditions.push_back(
      sign_test("B + alpha*Ik*Iy < 0", a3_criterion, a3_criterion < 0.0));
  const auto monic = c.monic();
  finish(v, monic, 2);
  return v;
}

StabilityVerdict routh_hurwitz_quartic(const CharCoeffsM2& c) {
  StabilityVerdict v;
  v.conditions.push_back(make_condition("a1 > 0", c.a1));
  v.conditions.push_back(make_condition("a3 > 0", c.a3));
  v.conditions.push_back(make_condition("a4 > 0", c.a4));
  v.conditions.push_back(make_condition("a1*a2*a3 - a3^2 - a1^2*a4 > 0", hurwitz_m2(c)));
  const double s = c.M + c.N;
  const double q = c.M * c.N;
  v.side_conditions.push_back(sign_test("M <= 0", c.M, c.M <= 0.0));
  v.side_conditions.push_back(sign_test("M + N < 0", s, s < 0.0));
  v.side_conditions.push_back(sign_test("M*N + P > 0", q + c.P, q + c.P > 0.0));
  if (c.M > 0.0) {
    const double bound = s / q;
    v.side_conditions.push_back(sign_test("T < (M+N)/(M*N)", bound, c.T < bound));
  }
  v.side_conditions.push_back(
      sign_test("phi(T) < 0", phi_quartic(c, c.T), phi_quartic(c, c.T) < 0.0));
  const auto monic = c.monic();
  finish(v, monic, 3);
  return v;
}

StabilityVerdict routh_hurwitz_general(std::span<const double> monic) {
  StabilityVerdict v;
  const auto minors = hurwitz_minors(monic);
  for (std::size_t i = 0; i < minors.size(); ++i) {
    v.conditions.push_back(make_condition("H" + std::to_string(i + 1) + " > 0", minors[i]));
  }
  // Δ_{n-1} vanishes at a Hopf point.
  const std::size_t hopf_index = minors.size() >= 2 ? minors.size() - 2 : minors.size();
  finish(v, monic, hopf_index);
  return v;
}

double cubic_discriminant(double a1, double a2, double a3) {
  return 18.0 * a1 * a2 * a3 - 4.0 * a1 * a1 * a1 * a3 + a1 * a1 * a2 * a2 -
         4.0 * a2 * a2 * a2 - 27.0 * a3 * a3;
}

double cubic_discriminant(const CharCoeffsM1& c) { return cubic_discriminant(c.a1, c.a2, c.a3); }

double hurwitz_m1(const CharCoeffsM1& c) { return c.a1 * c.a2 - c.a3; }

std::array<double, 3> criticality_quadratic(const CharCoeffsM1& c) {
  return {c.A * c.B, c.A * c.A + c.alpha_Ik_Iy, -c.A};
}

double hurwitz_m2(const CharCoeffsM2& c) {
  return c.a1 * c.a2 * c.a3 - c.a3 * c.a3 - c.a1 * c.a1 * c.a4;
}

double hurwitz_m2_deriv(const CharCoeffsM2& c) {
  const auto [d1, d2, d3, d4] = c.derivatives();
  return d1 * c.a2 * c.a3 + c.a1 * d2 * c.a3 + c.a1 * c.a2 * d3 - 2.0 * c.a3 * d3 -
         2.0 * c.a1 * d1 * c.a4 - c.a1 * c.a1 * d4;
}

std::array<double, 5> phi_quartic_coefficients(const CharCoeffsM2& c) {
  const double s = c.M + c.N;
  const double q = c.M * c.N;
  return {s * q * q, s * s * (c.P - 4.0 * q), 4.0 * s * (s * s + 2.0 * q - 2.0 * c.P),
          16.0 * (c.P - s * s), 16.0 * s};
}

double phi_quartic(const CharCoeffsM2& c, double T) {
  const auto coeffs = phi_quartic_coefficients(c);
  return evaluate(coeffs, T);
}

double phi_quartic_deriv(const CharCoeffsM2& c, double T) {
  const auto k = phi_quartic_coefficients(c);
  return ((4.0 * k[0] * T + 3.0 * k[1]) * T + 2.0 * k[2]) * T + k[3];
}

}  // namespace chaintrick
