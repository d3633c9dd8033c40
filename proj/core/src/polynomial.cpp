// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chaintrick/errors.hpp"

namespace chaintrick {

Complex evaluate(std::span<const double> coeffs, Complex z) {
  Complex acc{0.0, 0.0};
  for (double c : coeffs) acc = acc * z + c;
  return acc;
}

double evaluate(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

std::vector<double> trim_leading(std::span<const double> coeffs, double rel_tol) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  std::size_t first = 0;
  while (first < coeffs.size() && std::abs(coeffs[first]) <= rel_tol * scale) ++first;
  return {coeffs.begin() + static_cast<std::ptrdiff_t>(first), coeffs.end()};
}

namespace {

Complex derivative_at(std::span<const double> coeffs, Complex z) {
  const std::size_t n = coeffs.size() - 1;
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc = acc * z + coeffs[i] * static_cast<double>(n - i);
  return acc;
}

}  // namespace

std::vector<Complex> polynomial_roots(std::span<const double> coeffs) {
  const auto trimmed = trim_leading(coeffs);
  if (trimmed.size() < 2) return {};
  const std::size_t n = trimmed.size() - 1;
  std::vector<double> monic(trimmed.size());
  for (std::size_t i = 0; i < trimmed.size(); ++i) monic[i] = trimmed[i] / trimmed[0];

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) companion(0, static_cast<Eigen::Index>(j)) = -monic[j + 1];
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> roots;
  roots.reserve(n);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    Complex z = solver.eigenvalues()(i);
    const bool real_root = z.imag() == 0.0;
    for (int iter = 0; iter < 3; ++iter) {
      const Complex dp = derivative_at(monic, z);
      if (std::abs(dp) == 0.0) break;
      Complex next = z - evaluate(monic, z) / dp;
      if (real_root) next = Complex(next.real(), 0.0);
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      if (std::abs(evaluate(monic, next)) >= std::abs(evaluate(monic, z))) break;
      z = next;
    }
    const double bound = 1e-8 * (1.0 + std::pow(std::abs(z), static_cast<double>(n)));
    if (!(std::abs(evaluate(monic, z)) < bound)) {
      std::ostringstream msg;
      msg << "companion root " << z << " has residual " << std::abs(evaluate(monic, z));
      throw Error(ErrorCode::RootResidual, msg.str());
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return roots;
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& J) {
  const Eigen::Index n = J.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = J * Mk + c[static_cast<std::size_t>(k - 1)] * I;
    c[static_cast<std::size_t>(k)] = -(J * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& J) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(J, /*computeEigenvectors=*/false);
  std::vector<Complex> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(out.begin(), out.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return out;
}

std::vector<double> hurwitz_minors(std::span<const double> monic) {
  const auto n = static_cast<Eigen::Index>(monic.size()) - 1;
  // H(i, j) = a_{2j - i + 1} (0-based rows/cols), a_0 = 1, a_k = 0 outside [0, n].
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index idx = 2 * j - i + 1;
      if (idx >= 0 && idx <= n) H(i, j) = monic[static_cast<std::size_t>(idx)];
    }
  }
  std::vector<double> minors;
  minors.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 1; k <= n; ++k) minors.push_back(H.topLeftCorner(k, k).determinant());
  return minors;
}

}  // namespace chaintrick
