// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chaintrick {

using Complex = std::complex<double>;

/// Polynomials are coefficient vectors in descending powers: c[0] x^n + ... + c[n].

Complex evaluate(std::span<const double> coeffs, Complex z);
double evaluate(std::span<const double> coeffs, double x);

/// Drops leading coefficients that are zero relative to the largest magnitude.
std::vector<double> trim_leading(std::span<const double> coeffs, double rel_tol = 0.0);

/// Roots from the eigenvalues of the companion matrix. Each root is polished
/// by Newton iteration and must satisfy the monic residual bound
/// |p(z)| < 1e-8 (1 + |z|^n); throws RootResidual otherwise.
std::vector<Complex> polynomial_roots(std::span<const double> coeffs);

/// Monic characteristic polynomial det(λI - J), Faddeev–LeVerrier recursion.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& J);

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& J);

/// Leading principal minors of the Hurwitz matrix of a monic polynomial.
/// All positive iff every root has negative real part.
std::vector<double> hurwitz_minors(std::span<const double> monic);

}  // namespace chaintrick
