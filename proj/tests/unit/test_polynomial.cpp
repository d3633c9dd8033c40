// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "chaintrick/errors.hpp"
#include "chaintrick/polynomial.hpp"
#include "oracles.hpp"

using namespace chaintrick;

namespace {

double max_root_error(std::vector<Complex> got, std::vector<Complex> want) {
  auto key = [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(got.begin(), got.end(), key);
  std::sort(want.begin(), want.end(), key);
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
  return err;
}

}  // namespace

TEST(Polynomial, Evaluate) {
  const std::vector<double> p{1.0, -6.0, 11.0, -6.0};
  EXPECT_DOUBLE_EQ(evaluate(p, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(p, 0.0), -6.0);
  const auto z = evaluate(std::vector<double>{1.0, 0.0, 1.0}, Complex(0.0, 1.0));
  EXPECT_NEAR(std::abs(z), 0.0, 1e-15);
}

TEST(Polynomial, TrimLeading) {
  const std::vector<double> p{0.0, 1e-20, 2.0, 3.0};
  EXPECT_EQ(trim_leading(p).size(), 3u);
  EXPECT_EQ(trim_leading(p, 1e-14).size(), 2u);
}

TEST(Polynomial, RootsOfKnownCubic) {
  const auto r = polynomial_roots(std::vector<double>{1.0, -6.0, 11.0, -6.0});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_LT(max_root_error(r, {1.0, 2.0, 3.0}), 1e-12);
}

TEST(Polynomial, RootsOfComplexPair) {
  const auto r = polynomial_roots(std::vector<double>{1.0, -1.0, 1.0, -1.0});
  EXPECT_LT(max_root_error(r, {1.0, Complex(0, 1), Complex(0, -1)}), 1e-12);
}

TEST(Polynomial, RandomRootsRecovered) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<oracle::Cx> roots;
    const int pairs = trial % 3;
    for (int i = 0; i < pairs; ++i) {
      const oracle::Cx z(U(rng), std::abs(U(rng)) + 0.1);
      roots.push_back(z);
      roots.push_back(std::conj(z));
    }
    while (roots.size() < 5) roots.push_back(U(rng));
    const auto coeffs = oracle::poly_from_roots(roots);
    const auto got = polynomial_roots(coeffs);
    ASSERT_LT(max_root_error(got, roots), 1e-6) << trial;
    for (const auto& z : got) {
      ASSERT_LT(std::abs(evaluate(coeffs, z)), 1e-8 * (1 + std::pow(std::abs(z), 5)));
    }
  }
}

TEST(Polynomial, CharacteristicPolynomialMatchesEigenvalues) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = N(rng);
    const auto c = characteristic_polynomial(J);
    const auto ref = oracle::poly_from_roots(oracle::eigenvalues(J));
    ASSERT_EQ(c.size(), ref.size());
    for (std::size_t i = 0; i < c.size(); ++i) ASSERT_NEAR(c[i], ref[i], 1e-9 * (1 + std::abs(ref[i])));
  }
}

TEST(Polynomial, EigenvaluesAgreeWithDirectSolver) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 3;
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = N(rng);
    ASSERT_LT(max_root_error(eigenvalues(J), oracle::eigenvalues(J)), 1e-9);
  }
}

TEST(Polynomial, HurwitzMinorsSignalStability) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  int stable = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<oracle::Cx> roots;
    const oracle::Cx z(U(rng), U(rng));
    roots.push_back(z);
    roots.push_back(std::conj(z));
    roots.push_back(U(rng));
    roots.push_back(U(rng) - 0.5);
    const double margin = oracle::max_real(roots);
    if (std::abs(margin) < 1e-3) continue;
    const auto minors = hurwitz_minors(oracle::poly_from_roots(roots));
    const bool all_positive =
        std::all_of(minors.begin(), minors.end(), [](double v) { return v > 0.0; });
    ASSERT_EQ(all_positive, margin < 0.0) << trial;
    stable += all_positive;
  }
  EXPECT_GT(stable, 50);
}
