#include "avgsym/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "avgsym/rng.hpp"

namespace avgsym {

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= kSvdMaxDim) return spectral_norm_svd(a);
  return spectral_norm_power(a);
}

double spectral_norm_svd(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double spectral_norm_power(const CMatrix& a, int max_iterations, double rel_tol) {
  if (a.size() == 0) return 0.0;
  Rng rng = make_rng(0x5eed, static_cast<std::uint64_t>(a.cols()));
  std::normal_distribution<double> normal;
  CVector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const CVector av = a * v;
    estimate = av.squaredNorm();
    const CVector w = a.adjoint() * av;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    // Eigen-residual of the Gram matrix; the eigenvalue error is quadratic in it.
    const double residual = (w - estimate * v).norm();
    v = w / wn;
    if (residual <= rel_tol * estimate) break;
  }
  return std::sqrt(std::max(estimate, (a * v).squaredNorm()));
}

double operator_norm_sq(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const CMatrix gram = a.cols() <= a.rows() ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

int numerical_rank(const RMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<RMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double threshold = rel_tol * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > threshold;
  return rank;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

}  // namespace avgsym
