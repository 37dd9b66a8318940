#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include "acspec/model.hpp"

namespace acspec {

// Eigenvalues of a Hermitian matrix, ascending. The caller guarantees the
// Hermitian invariant; entries must be finite.
template <class Derived>
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& M) {
  if (!M.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  if (M.rows() != M.cols()) throw std::invalid_argument("matrix must be square");
  Eigen::SelfAdjointEigenSolver<DenseMatrix<typename Derived::Scalar>> es(M.derived(),
                                                                          Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue decomposition failed");
  return es.eigenvalues();
}

// Stieltjes transform of the empirical spectral distribution,
// (1/p) sum_j (lambda_j - z)^{-1}; requires Im z > 0.
Complex empirical_stieltjes(const Eigen::VectorXd& eigenvalues, Complex z);

// Kolmogorov distance between two empirical spectra (step CDFs).
double ks_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Kolmogorov distance between an empirical spectrum and a reference CDF,
// evaluated at the spectrum's jump points.
double ks_distance(const Eigen::VectorXd& a, const std::function<double(double)>& cdf);

}  // namespace acspec
