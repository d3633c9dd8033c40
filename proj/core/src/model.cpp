// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/model.hpp"

#include <cmath>
#include <sstream>

#include "chaintrick/errors.hpp"

namespace chaintrick {

namespace {

double sigmoid(double z) {
  // Split by sign so neither branch overflows.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be finite and > 0, got " << value;
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

}  // namespace

void InvestmentParams::validate() const {
  require_positive(a, "a");
  require_positive(c, "c");
  require_positive(d, "d");
  require_positive(v, "v");
}

void MacroParams::validate() const {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(delta, "delta");
  require_positive(G0, "G0");
  if (!std::isfinite(g)) throw Error(ErrorCode::InvalidParameter, "g must be finite");
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw Error(ErrorCode::DelayNonPositive, "T must be finite and >= 0");
  }
  if (m < 1) throw Error(ErrorCode::KernelOrderInvalid, "kernel order m must be >= 1");
}

void MacroParams::validate_for_stability() const {
  validate();
  if (!(T > 0.0)) throw Error(ErrorCode::DelayNonPositive, "T must be > 0");
}

double phi(double x, const InvestmentParams& inv) {
  return inv.c + inv.d * sigmoid(inv.a * (inv.v * x - 1.0));
}

double phi_prime(double x, const InvestmentParams& inv) {
  const double s = sigmoid(inv.a * (inv.v * x - 1.0));
  return inv.a * inv.d * inv.v * s * (1.0 - s);
}

double investment(double y, double k, const InvestmentParams& inv) {
  return k * phi(y / k, inv);
}

std::pair<double, double> admissible_growth(const InvestmentParams& inv, double delta) {
  return {inv.c - delta, inv.c + inv.d - delta};
}

double solve_x_star(const InvestmentParams& inv, double g, double delta) {
  const double target = g + delta;
  if (!(target > inv.c && target < inv.c + inv.d)) {
    const auto [lo, hi] = admissible_growth(inv, delta);
    std::ostringstream msg;
    msg.precision(17);
    msg << "g = " << g;
    msg.precision(10);
    msg << " outside admissible interval (" << lo << ", " << hi << ")";
    throw Error(ErrorCode::GrowthOutOfRange, msg.str());
  }
  return (1.0 - std::log(inv.d / (target - inv.c) - 1.0) / inv.a) / inv.v;
}

InvestmentDerivs investment_derivs(double x_star, const InvestmentParams& inv, double g,
                                   double delta) {
  InvestmentDerivs out;
  out.Iy = phi_prime(x_star, inv);
  out.Ik = g + delta - x_star * out.Iy;
  return out;
}

Equilibrium equilibrium(const MacroParams& p, const InvestmentParams& inv) {
  inv.validate();
  p.validate();

  Equilibrium eq;
  eq.x_star = solve_x_star(inv, p.g, p.delta);
  if (!(eq.x_star > 0.0)) {
    throw Error(ErrorCode::NonPositiveEquilibrium, "output-capital ratio x* <= 0");
  }
  const double denom = p.g * eq.x_star + p.alpha * (p.gamma * eq.x_star - (p.g + p.delta));
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "k* denominator gx* + alpha(gamma x* - (g+delta)) = " << denom
        << " <= 0; fixed point outside the positive quadrant";
    throw Error(ErrorCode::NonPositiveEquilibrium, msg.str());
  }
  eq.k_star = p.alpha * p.G0 / denom;
  eq.y_star = eq.x_star * eq.k_star;
  const auto derivs = investment_derivs(eq.x_star, inv, p.g, p.delta);
  eq.Iy_star = derivs.Iy;
  eq.Ik_star = derivs.Ik;
  eq.above_midpoint = eq.x_star >= 1.0 / inv.v;
  return eq;
}

}  // namespace chaintrick
