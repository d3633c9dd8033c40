// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "chaintrick/chain_system.hpp"
#include "chaintrick/errors.hpp"
#include "oracles.hpp"

using namespace chaintrick;

namespace {

const InvestmentParams kInv{};

MacroParams params(int m, double T = 1.0) {
  MacroParams p;
  p.m = m;
  p.T = T;
  return p;
}

}  // namespace

TEST(ChainSystem, BuildRejectsBadDelayAndOrder) {
  try {
    ChainSystem::build(params(1, 0.0), kInv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DelayNonPositive);
  }
  try {
    ChainSystem::build(params(0), kInv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KernelOrderInvalid);
  }
}

TEST(ChainSystem, WeakKernelStage) {
  const auto sys = ChainSystem::build(params(1, 2.5), kInv);
  ChainState s(Eigen::Vector3d(20.0, 18.0, 110.0));
  const auto ds = sys.rhs(s);
  EXPECT_DOUBLE_EQ(ds.u(1), (1.0 / 2.5) * (20.0 - 18.0));
  // k' uses I(u, k).
  EXPECT_NEAR(ds.k(), oracle::ref_investment(18.0, 110.0, kInv) - (0.016 + 0.007) * 110.0, 1e-14);
}

TEST(ChainSystem, StrongKernelWiring) {
  const MacroParams p = params(2, 3.0);
  const auto sys = ChainSystem::build(p, kInv);
  Eigen::VectorXd v(4);
  v << 20.0, 19.0, 17.0, 105.0;  // y, w, p, k
  const auto ds = sys.rhs(ChainState(v));
  EXPECT_DOUBLE_EQ(ds.u(1), (2.0 / 3.0) * (20.0 - 19.0));
  EXPECT_DOUBLE_EQ(ds.u(2), (2.0 / 3.0) * (19.0 - 17.0));
  EXPECT_NEAR(ds.k(), oracle::ref_investment(17.0, 105.0, kInv) - (p.g + p.delta) * 105.0, 1e-14);
  EXPECT_NEAR(ds.y(),
              p.alpha * (oracle::ref_investment(20.0, 105.0, kInv) - p.gamma * 20.0 + p.G0) -
                  p.g * 20.0,
              1e-13);
}

TEST(ChainSystem, GeneratedRhsMatchesWrittenOutEquations) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  for (int m : {1, 2, 3, 5}) {
    const auto d = oracle::random_draw(rng, m);
    const auto sys = ChainSystem::build(d.p, d.inv);
    const auto eq = equilibrium(d.p, d.inv);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd v(m + 2);
      for (int i = 0; i < m + 1; ++i) v(i) = eq.y_star * U(rng);
      v(m + 1) = eq.k_star * U(rng);
      const auto ds = sys.rhs(ChainState(v)).values();
      const auto ref = oracle::chain_rhs(d.p, d.inv, v);
      for (int i = 0; i < m + 2; ++i) ASSERT_NEAR(ds(i), ref(i), 1e-12 * (1 + std::abs(ref(i))));
    }
  }
}

TEST(ChainSystem, EquilibriumIsFixedPoint) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + i % 4;
    const auto d = oracle::random_draw(rng, m);
    const auto eq = equilibrium(d.p, d.inv);
    const auto sys = ChainSystem::build(d.p, d.inv);
    const auto ds = sys.rhs(ChainState::at_equilibrium(m, eq));
    ASSERT_LE(ds.values().cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ChainSystem, LinearizationOfFirstComponent) {
  const MacroParams p = params(1);
  const auto eq = equilibrium(p, kInv);
  const auto sys = ChainSystem::build(p, kInv);
  auto s = ChainState::at_equilibrium(1, eq);
  const double eps = 1e-6;
  s.y() += eps;
  const double expected = (p.alpha * (eq.Iy_star - p.gamma) - p.g) * eps;
  EXPECT_NEAR(sys.rhs(s).y(), expected, 1e-6 * std::abs(expected));
}

TEST(ChainSystem, RejectsNonPositiveCapital) {
  const auto sys = ChainSystem::build(params(1), kInv);
  try {
    sys.rhs(ChainState(Eigen::Vector3d(20.0, 20.0, 0.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapitalNonPositive);
  }
  std::vector<double> s{20.0, 20.0, -1.0}, ds(3);
  EXPECT_FALSE(sys.rhs_into(s, ds));
}

TEST(ChainSystem, FromHistory) {
  const auto s = ChainState::from_history(3, 15.0, 100.0);
  EXPECT_EQ(s.dimension(), 5);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(s.u(i), 15.0);
  EXPECT_EQ(s.y(), 15.0);
  EXPECT_EQ(s.k(), 100.0);
}

TEST(Jacobian, WeakKernelPattern) {
  const double T = 2.0;
  const MacroParams p = params(1, T);
  const auto eq = equilibrium(p, kInv);
  const auto J = ChainSystem::build(p, kInv).equilibrium_jacobian(eq);
  ASSERT_EQ(J.rows(), 3);
  EXPECT_NEAR(J(0, 0), p.alpha * (eq.Iy_star - p.gamma) - p.g, 1e-15);
  EXPECT_EQ(J(0, 1), 0.0);
  EXPECT_NEAR(J(0, 2), p.alpha * eq.Ik_star, 1e-15);
  EXPECT_DOUBLE_EQ(J(1, 0), 1.0 / T);
  EXPECT_DOUBLE_EQ(J(1, 1), -1.0 / T);
  EXPECT_EQ(J(1, 2), 0.0);
  EXPECT_EQ(J(2, 0), 0.0);
  EXPECT_NEAR(J(2, 1), eq.Iy_star, 1e-15);
  EXPECT_NEAR(J(2, 2), eq.Ik_star - (p.g + p.delta), 1e-15);
}

TEST(Jacobian, StrongKernelPattern) {
  const double T = 2.0;
  const MacroParams p = params(2, T);
  const auto eq = equilibrium(p, kInv);
  const auto J = ChainSystem::build(p, kInv).equilibrium_jacobian(eq);
  ASSERT_EQ(J.rows(), 4);
  EXPECT_DOUBLE_EQ(J(1, 0), 2.0 / T);
  EXPECT_DOUBLE_EQ(J(1, 1), -2.0 / T);
  EXPECT_DOUBLE_EQ(J(2, 1), 2.0 / T);
  EXPECT_DOUBLE_EQ(J(2, 2), -2.0 / T);
  EXPECT_NEAR(J(3, 2), eq.Iy_star, 1e-15);
  EXPECT_EQ(J(3, 0), 0.0);
  EXPECT_EQ(J(3, 1), 0.0);
  EXPECT_NEAR(J(0, 3), p.alpha * eq.Ik_star, 1e-15);
}

TEST(Jacobian, TraceFormula) {
  std::mt19937_64 rng(17);
  for (int m = 1; m <= 6; ++m) {
    const auto d = oracle::random_draw(rng, m);
    const auto eq = equilibrium(d.p, d.inv);
    const auto J = ChainSystem::build(d.p, d.inv).equilibrium_jacobian(eq);
    const double rate = m / d.p.T;
    const double expected = (d.p.alpha * (eq.Iy_star - d.p.gamma) - d.p.g) +
                            (eq.Ik_star - (d.p.g + d.p.delta)) - m * rate;
    EXPECT_NEAR(J.trace(), expected, 1e-12 * (1 + std::abs(expected)));
    const auto Jfd = oracle::equilibrium_jacobian(d.p, d.inv);
    EXPECT_NEAR(Jfd.trace(), expected, 1e-6 * (1 + std::abs(expected)));
  }
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 4;
    const auto d = oracle::random_draw(rng, m);
    const auto eq = equilibrium(d.p, d.inv);
    const auto sys = ChainSystem::build(d.p, d.inv);
    Eigen::VectorXd v(m + 2);
    for (int i = 0; i < m + 1; ++i) v(i) = eq.y_star * U(rng);
    v(m + 1) = eq.k_star * U(rng);
    const ChainState s(v);
    const auto J = sys.jacobian(s);
    const auto Jfd = oracle::fd_jacobian(sys, s);
    const double scale = Jfd.cwiseAbs().maxCoeff();
    ASSERT_LE((J - Jfd).cwiseAbs().maxCoeff(), 1e-6 * scale) << "trial " << trial;
  }
}

TEST(Jacobian, EquilibriumVariantAgreesWithGeneral) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 4;
    const auto d = oracle::random_draw(rng, m);
    const auto eq = equilibrium(d.p, d.inv);
    const auto sys = ChainSystem::build(d.p, d.inv);
    const auto J1 = sys.equilibrium_jacobian(eq);
    const auto J2 = sys.jacobian(ChainState::at_equilibrium(m, eq));
    ASSERT_LE((J1 - J2).cwiseAbs().maxCoeff(), 1e-12 * (1 + J1.cwiseAbs().maxCoeff()));
  }
}
