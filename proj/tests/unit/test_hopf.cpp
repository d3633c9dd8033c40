// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "chaintrick/chain_system.hpp"
#include "chaintrick/errors.hpp"
#include "chaintrick/hopf.hpp"
#include "oracles.hpp"

using namespace chaintrick;

namespace {

const InvestmentParams kInv{};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidParameter;
}

/// Largest real part among complex pairs, from the oracle's eigen solver.
double pair_rate(const MacroParams& p, const InvestmentParams& inv) {
  const auto J = ChainSystem::build(p, inv).equilibrium_jacobian(equilibrium(p, inv));
  return oracle::max_pair_real(oracle::eigenvalues(J));
}

/// Bisection on the pair's real part over [lo, hi] in the given parameter.
double bisect_crossing(const MacroParams& p, const InvestmentParams& inv,
                       BifurcationParameter which, double lo, double hi) {
  double flo = pair_rate(with_parameter(p, which, lo), inv);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = pair_rate(with_parameter(p, which, mid), inv);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MacroParams with(double alpha, double g, int m, double T = 1.0) {
  MacroParams p;
  p.alpha = alpha;
  p.g = g;
  p.m = m;
  p.T = T;
  return p;
}

}  // namespace

TEST(HopfM1, ZeroBWithoutCrossing) {
  MacroParams p;
  const auto eq0 = equilibrium(p, kInv);
  p.alpha = p.g / (eq0.Iy_star - p.gamma);  // B = 0
  const auto eq = equilibrium(p, kInv);
  const auto c = coeffs_m1(eq, p);
  ASSERT_NEAR(c.B, 0.0, 1e-15);
  ASSERT_GE(c.A * c.A + c.alpha_Ik_Iy, 0.0);
  EXPECT_EQ(code_of([&] { hopf_in_T_m1(eq, p); }), ErrorCode::NoHopf);
}

TEST(HopfM1, PositiveBHasOneDestabilizingRoot) {
  const MacroParams p = with(0.6, 0.016, 1);
  const auto eq = equilibrium(p, kInv);
  ASSERT_GT(coeffs_m1(eq, p).B, 0.0);
  const auto pts = hopf_in_T_m1(eq, p);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].crossing, Crossing::Destabilizing);
  EXPECT_GT(pts[0].transversality, 0.0);
}

TEST(HopfM1, UnstableForAllDelays) {
  const MacroParams p = with(0.9, 0.016, 1);
  EXPECT_EQ(code_of([&] { hopf_in_T_m1(equilibrium(p, kInv), p); }), ErrorCode::NoStableRegime);
  EXPECT_FALSE(critical_delay(p, kInv).has_value());
}

TEST(HopfM1, AlphaPointSevenNearFittedCurve) {
  const MacroParams p = with(0.7, 0.016, 1);
  const auto T = critical_delay(p, kInv);
  ASSERT_TRUE(T.has_value());
  EXPECT_NEAR(*T, -11.137983 + 8.512805 / 0.7, 0.05);
  const double ref = bisect_crossing(p, kInv, BifurcationParameter::T, 0.5, 2.0);
  EXPECT_NEAR(*T, ref, 1e-9 * ref);
}

TEST(HopfM2, ZeroMHasOneRootAndShortDelaysAreStable) {
  MacroParams p = with(1.0, 0.016, 2);
  const auto eq0 = equilibrium(p, kInv);
  p.alpha = p.g / (eq0.Iy_star - p.gamma);  // M = 0
  const auto eq = equilibrium(p, kInv);
  ASSERT_NEAR(coeffs_m2(eq, p).M, 0.0, 1e-15);
  const auto pts = hopf_in_T_m2(eq, p);
  ASSERT_EQ(pts.size(), 1u);
  const double T0 = pts[0].value;
  for (double f : {0.01, 0.3, 0.9}) {
    EXPECT_TRUE(eigen_signature(with_parameter(p, BifurcationParameter::T, f * T0), kInv).stable());
  }
  EXPECT_FALSE(eigen_signature(with_parameter(p, BifurcationParameter::T, 1.1 * T0), kInv).stable());
}

TEST(HopfM2, RemainingPairIsStable) {
  const MacroParams p = with(0.6, 0.016, 2);
  const auto eq = equilibrium(p, kInv);
  for (const auto& h : hopf_in_T_m2(eq, p)) {
    const auto c = coeffs_m2(eq, p).at(h.value);
    EXPECT_GT((c.a1 * c.a2 - c.a3) / c.a1, 0.0);
  }
}

TEST(HopfM2, StrongKernelDestabilizesSooner) {
  const auto t1 = critical_delay(with(0.7, 0.016, 1), kInv);
  const auto t2 = critical_delay(with(0.7, 0.016, 2), kInv);
  ASSERT_TRUE(t1 && t2);
  EXPECT_LT(*t2, *t1);
}

TEST(HopfInG, TableTwoRows) {
  const MacroParams p;
  const struct {
    int m;
    double g1, g2;
  } rows[] = {{1, 0.01011989, 0.02032586}, {2, 0.01011919, 0.02032671},
              {4, 0.01011906, 0.02032703}};
  for (const auto& r : rows) {
    const auto report = hopf_in_g(p, kInv, r.m);
    const auto pts = report.hopf_points();
    ASSERT_EQ(pts.size(), 2u) << r.m;
    EXPECT_NEAR(pts[0].value, r.g1, 2e-6) << r.m;
    EXPECT_NEAR(pts[1].value, r.g2, 2e-6) << r.m;
    EXPECT_EQ(pts[0].crossing, Crossing::Destabilizing);
    EXPECT_EQ(pts[1].crossing, Crossing::Stabilizing);
  }
}

TEST(HopfInG, MatchesEigenvalueBisection) {
  const MacroParams p;
  ScanOptions scan;
  scan.tolerance = 1e-13;
  const auto pts = hopf_in_g(p, kInv, 1, scan).hopf_points();
  ASSERT_EQ(pts.size(), 2u);
  const double g1 = bisect_crossing(p, kInv, BifurcationParameter::g, 0.009, 0.011);
  const double g2 = bisect_crossing(p, kInv, BifurcationParameter::g, 0.019, 0.021);
  EXPECT_NEAR(pts[0].value, g1, 1e-11);
  EXPECT_NEAR(pts[1].value, g2, 1e-11);
}

TEST(HopfInG, SubintervalOrdering) {
  const auto report = hopf_in_g(MacroParams{}, kInv, 1);
  std::vector<double> transitions, hopf;
  for (const auto& b : report.boundaries) {
    if (b.kind == BoundaryKind::RealComplexTransition) transitions.push_back(b.g);
    if (b.kind == BoundaryKind::Hopf) hopf.push_back(b.g);
  }
  ASSERT_EQ(transitions.size(), 2u);
  ASSERT_EQ(hopf.size(), 2u);
  EXPECT_LT(transitions[0], hopf[0]);
  EXPECT_LT(hopf[0], hopf[1]);
  EXPECT_LT(hopf[1], transitions[1]);
  for (std::size_t i = 1; i < report.classification.size(); ++i) {
    EXPECT_EQ(report.classification[i].lo, report.classification[i - 1].hi);
  }
}

TEST(HopfInAlpha, ShortDelayThreshold) {
  const MacroParams p = with(1.0, 0.016, 1, 1e-3);
  const auto pts = hopf_in_alpha(p, kInv, 1, 0.5, 1.0);
  ASSERT_FALSE(pts.empty());
  EXPECT_NEAR(pts[0].value, 0.7644, 1e-3);
}

TEST(HopfInAlpha, InvertsFittedCurve) {
  const MacroParams p = with(1.0, 0.016, 1, 1.0);
  const auto pts = hopf_in_alpha(p, kInv, 1, 0.5, 1.0);
  ASSERT_FALSE(pts.empty());
  EXPECT_NEAR(pts[0].value, 8.512805 / (1.0 + 11.137983), 0.005);
  // Round trip: T_bi at that alpha is the fixed T.
  const auto T = critical_delay(with(pts[0].value, 0.016, 1), kInv);
  ASSERT_TRUE(T.has_value());
  EXPECT_NEAR(*T, 1.0, 1e-7);
}

TEST(HopfInAlpha, DegenerateRangeHasNoHopf) {
  const MacroParams p = with(1.0, 0.016, 1, 1.0);
  EXPECT_EQ(code_of([&] { hopf_in_alpha(p, kInv, 1, 0.3, 0.4); }), ErrorCode::NoHopf);
}

TEST(HopfProperties, ClosedFormAgreesWithNumericRoute) {
  for (int m : {1, 2}) {
    std::mt19937_64 rng(97 + m);
    int checked = 0;
    for (int i = 0; i < 5000 && checked < 200; ++i) {
      const auto d = oracle::random_draw(rng, m);
      std::vector<HopfPoint> closed;
      try {
        closed = hopf_in_T(d.p, d.inv);
      } catch (const Error&) {
        continue;
      }
      if (closed.size() != 1 || closed[0].value > 150.0 || closed[0].value < 2e-3) continue;
      const double Tc = closed[0].value;
      const auto numeric = hopf_in_T_numeric(d.p, d.inv, 1e-3, 200.0);
      ASSERT_EQ(numeric.size(), 1u) << "m=" << m << " draw " << i;
      ASSERT_NEAR(numeric[0].value, Tc, 1e-7 * Tc);
      const double ref = bisect_crossing(d.p, d.inv, BifurcationParameter::T, Tc / 1.05, Tc * 1.05);
      ASSERT_NEAR(ref, Tc, 1e-7 * Tc);
      ++checked;
    }
    EXPECT_EQ(checked, 200) << m;
  }
}

TEST(HopfProperties, TransversalityClosedFormSign) {
  for (int m : {1, 2}) {
    std::mt19937_64 rng(101 + m);
    int checked = 0;
    for (int i = 0; i < 5000 && checked < 40; ++i) {
      const auto d = oracle::random_draw(rng, m);
      std::vector<HopfPoint> pts;
      try {
        pts = hopf_in_T(d.p, d.inv);
      } catch (const Error&) {
        continue;
      }
      const auto eq = equilibrium(d.p, d.inv);
      for (const auto& h : pts) {
        double closed_sign;
        if (m == 1) {
          const auto c = coeffs_m1(eq, d.p);
          closed_sign = c.B * h.value * h.value + 1.0;
        } else {
          closed_sign = -hurwitz_m2_deriv(coeffs_m2(eq, d.p).at(h.value));
        }
        const double fd = transversality_fd(d.p, d.inv, BifurcationParameter::T, h.value,
                                            h.omega, 1e-5 * h.value);
        ASSERT_EQ(fd > 0.0, closed_sign > 0.0) << "m=" << m << " T*=" << h.value;
        ASSERT_EQ(h.transversality > 0.0, fd > 0.0);
        ++checked;
      }
    }
    EXPECT_GE(checked, 40) << m;
  }
}

TEST(HopfProperties, PureImaginaryResidual) {
  std::mt19937_64 rng(103);
  int checked = 0;
  for (int i = 0; i < 3000 && checked < 100; ++i) {
    const int m = 1 + i % 2;
    const auto d = oracle::random_draw(rng, m);
    std::vector<HopfPoint> pts;
    try {
      pts = hopf_in_T(d.p, d.inv);
    } catch (const Error&) {
      continue;
    }
    for (const auto& h : pts) {
      const auto pp = with_parameter(d.p, BifurcationParameter::T, h.value);
      const auto eq = equilibrium(pp, d.inv);
      std::vector<double> mon;
      if (m == 1) {
        const auto a = coeffs_m1(eq, pp).monic();
        mon.assign(a.begin(), a.end());
      } else {
        const auto a = coeffs_m2(eq, pp).monic();
        mon.assign(a.begin(), a.end());
      }
      ASSERT_LT(std::abs(evaluate(mon, Complex(0.0, h.omega))), 1e-8);
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(EigenSignature, Descriptions) {
  MacroParams p;
  p.g = 0.015;
  EXPECT_EQ(eigen_signature(p, kInv).describe(), "1 negative, pair with positive real part");
  p.g = 0.025;
  EXPECT_EQ(eigen_signature(p, kInv).describe(), "1 negative, pair with negative real part");
  p.g = 0.005;
  EXPECT_TRUE(eigen_signature(p, kInv).stable());
}

TEST(AssessStability, AgreesAcrossOrders) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 300; ++i) {
    const int m = 1 + i % 4;
    const auto d = oracle::random_draw(rng, m);
    const auto r = assess_stability(d.p, d.inv);
    bool marginal = false;
    for (const auto& c : r.verdict.conditions) marginal = marginal || std::abs(c.value) < 1e-8;
    if (marginal) continue;
    const auto J = ChainSystem::build(d.p, d.inv).equilibrium_jacobian(r.equilibrium);
    ASSERT_EQ(r.verdict.stable, oracle::max_real(oracle::eigenvalues(J)) < 0.0);
    ASSERT_EQ(r.verdict.stable, r.signature.stable());
  }
}
