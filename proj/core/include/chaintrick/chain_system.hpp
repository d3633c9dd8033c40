// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include <Eigen/Dense>

#include "chaintrick/model.hpp"

namespace chaintrick {

/// State (y, u_1 .. u_m, k) of the chain-reduced system, stored contiguously
/// in that order. u_1 is driven by y and u_m enters the investment function.
class ChainState {
 public:
  ChainState() = default;
  explicit ChainState(int m);
  explicit ChainState(Eigen::VectorXd values);

  /// All chain variables equal to y0. This is the image of a constant initial
  /// history y(t) = y0 on t <= 0 under the chain reduction.
  static ChainState from_history(int m, double y0, double k0);
  static ChainState at_equilibrium(int m, const Equilibrium& eq);

  int m() const { return static_cast<int>(values_.size()) - 2; }
  Eigen::Index dimension() const { return values_.size(); }

  double y() const { return values_(0); }
  double& y() { return values_(0); }
  double k() const { return values_(values_.size() - 1); }
  double& k() { return values_(values_.size() - 1); }
  /// Chain variable u_i, 1-based to match the cascade numbering.
  double u(int i) const { return values_(i); }
  double& u(int i) { return values_(i); }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// The (m+2)-dimensional ODE obtained from the linear chain trick:
///   y'   = α[I(y, k) - γy + G0] - gy
///   u_i' = (m/T)(u_{i-1} - u_i),  u_0 = y
///   k'   = I(u_m, k) - (g + δ)k
class ChainSystem {
 public:
  /// Throws DelayNonPositive (T <= 0) or KernelOrderInvalid (m < 1).
  static ChainSystem build(const MacroParams& p, const InvestmentParams& inv);

  const MacroParams& params() const { return params_; }
  const InvestmentParams& investment() const { return inv_; }
  int m() const { return params_.m; }
  int dimension() const { return params_.m + 2; }
  /// Stage rate m/T of the cascade.
  double rate() const { return rate_; }

  /// Throws CapitalNonPositive when k <= 0.
  ChainState rhs(const ChainState& s) const;
  Eigen::MatrixXd jacobian(const ChainState& s) const;

  /// Unchecked flat evaluation used by the integrator; returns false when
  /// k <= 0 instead of throwing.
  bool rhs_into(std::span<const double> s, std::span<double> ds) const;

  /// Jacobian at the fixed point, built from Iy*, Ik* directly.
  Eigen::MatrixXd equilibrium_jacobian(const Equilibrium& eq) const;

 private:
  ChainSystem(const MacroParams& p, const InvestmentParams& inv);

  MacroParams params_;
  InvestmentParams inv_;
  double rate_;
};

}  // namespace chaintrick
