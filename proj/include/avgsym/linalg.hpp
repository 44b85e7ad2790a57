#pragma once

#include <complex>

#include <Eigen/Dense>

namespace avgsym {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense SVD is used up to this dimension, power iteration above.
inline constexpr int kSvdMaxDim = 64;

/// Largest singular value; dispatches on max(rows, cols).
double spectral_norm(const CMatrix& a);
double spectral_norm_svd(const CMatrix& a);
/// Power iteration on A^H A from a fixed pseudo-random start vector.
double spectral_norm_power(const CMatrix& a, int max_iterations = 2000, double rel_tol = 1e-7);

/// Squared operator norm as the top eigenvalue of the Hermitian matrix A^H A.
double operator_norm_sq(const CMatrix& a);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const RMatrix& a, double rel_tol);

double frobenius_distance(const CMatrix& a, const CMatrix& b);

}  // namespace avgsym
