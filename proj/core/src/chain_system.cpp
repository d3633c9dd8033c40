// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/chain_system.hpp"

#include <sstream>

#include "chaintrick/errors.hpp"

namespace chaintrick {

ChainState::ChainState(int m) : values_(Eigen::VectorXd::Zero(m + 2)) {
  if (m < 1) throw Error(ErrorCode::KernelOrderInvalid, "kernel order m must be >= 1");
}

ChainState::ChainState(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw Error(ErrorCode::KernelOrderInvalid, "chain state needs at least (y, u_1, k)");
  }
}

ChainState ChainState::from_history(int m, double y0, double k0) {
  ChainState s(m);
  s.values_.head(m + 1).setConstant(y0);
  s.k() = k0;
  return s;
}

ChainState ChainState::at_equilibrium(int m, const Equilibrium& eq) {
  return from_history(m, eq.y_star, eq.k_star);
}

ChainSystem::ChainSystem(const MacroParams& p, const InvestmentParams& inv)
    : params_(p), inv_(inv), rate_(p.m / p.T) {}

ChainSystem ChainSystem::build(const MacroParams& p, const InvestmentParams& inv) {
  if (p.m < 1) throw Error(ErrorCode::KernelOrderInvalid, "kernel order m must be >= 1");
  if (!(p.T > 0.0)) {
    throw Error(ErrorCode::DelayNonPositive, "mean delay T must be > 0 for the chain system");
  }
  p.validate();
  inv.validate();
  return ChainSystem(p, inv);
}

bool ChainSystem::rhs_into(std::span<const double> s, std::span<double> ds) const {
  const std::size_t n = s.size();
  const double y = s[0];
  const double k = s[n - 1];
  if (!(k > 0.0)) return false;
  const auto& p = params_;

  ds[0] = p.alpha * (chaintrick::investment(y, k, inv_) - p.gamma * y + p.G0) - p.g * y;
  double upstream = y;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    ds[i] = rate_ * (upstream - s[i]);
    upstream = s[i];
  }
  ds[n - 1] = chaintrick::investment(upstream, k, inv_) - (p.g + p.delta) * k;
  return true;
}

ChainState ChainSystem::rhs(const ChainState& s) const {
  if (s.m() != m()) throw Error(ErrorCode::KernelOrderInvalid, "state order does not match system");
  ChainState out(m());
  if (!rhs_into(std::span(s.values().data(), s.values().size()),
                std::span(out.values().data(), out.values().size()))) {
    std::ostringstream msg;
    msg << "capital k = " << s.k() << " <= 0";
    throw Error(ErrorCode::CapitalNonPositive, msg.str());
  }
  return out;
}

Eigen::MatrixXd ChainSystem::jacobian(const ChainState& s) const {
  if (s.m() != m()) throw Error(ErrorCode::KernelOrderInvalid, "state order does not match system");
  const double k = s.k();
  if (!(k > 0.0)) {
    std::ostringstream msg;
    msg << "capital k = " << k << " <= 0";
    throw Error(ErrorCode::CapitalNonPositive, msg.str());
  }
  const auto& p = params_;
  const int n = dimension();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);

  // dI/dy = Φ'(y/k), dI/dk = Φ(y/k) - (y/k)Φ'(y/k)
  const double xy = s.y() / k;
  const double dphi_y = phi_prime(xy, inv_);
  J(0, 0) = p.alpha * (dphi_y - p.gamma) - p.g;
  J(0, n - 1) = p.alpha * (phi(xy, inv_) - xy * dphi_y);

  for (int i = 1; i <= m(); ++i) {
    J(i, i - 1) = rate_;
    J(i, i) = -rate_;
  }

  const double xu = s.u(m()) / k;
  const double dphi_u = phi_prime(xu, inv_);
  J(n - 1, m()) = dphi_u;
  J(n - 1, n - 1) = phi(xu, inv_) - xu * dphi_u - (p.g + p.delta);
  return J;
}

Eigen::MatrixXd ChainSystem::equilibrium_jacobian(const Equilibrium& eq) const {
  const auto& p = params_;
  const int n = dimension();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J(0, 0) = p.alpha * (eq.Iy_star - p.gamma) - p.g;
  J(0, n - 1) = p.alpha * eq.Ik_star;
  for (int i = 1; i <= m(); ++i) {
    J(i, i - 1) = rate_;
    J(i, i) = -rate_;
  }
  J(n - 1, m()) = eq.Iy_star;
  J(n - 1, n - 1) = eq.Ik_star - (p.g + p.delta);
  return J;
}

}  // namespace chaintrick
