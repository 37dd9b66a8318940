#pragma once

#include <stdexcept>

#include "acspec/model.hpp"
#include "acspec/simulate.hpp"

namespace acspec {

// Symmetrized lag-tau sample autocovariance
//   S_tau = (1/(2(n-tau))) sum_{t=tau+1}^n (X_t X_{t-tau}^* + X_{t-tau} X_t^*),
// evaluated as one cross product plus its adjoint, which is Hermitian by
// construction in floating point.
template <class Derived>
DenseMatrix<typename Derived::Scalar> sample_autocov(const Eigen::MatrixBase<Derived>& X, int tau) {
  const int n = static_cast<int>(X.cols());
  if (tau < 0 || tau >= n) throw std::invalid_argument("need 0 <= tau < n");
  DenseMatrix<typename Derived::Scalar> A =
      X.derived().rightCols(n - tau) * X.derived().leftCols(n - tau).adjoint();
  DenseMatrix<typename Derived::Scalar> S = (A + A.adjoint()) / (2.0 * (n - tau));
  return S;
}

// Population counterpart Sigma_tau = E[S_tau]: diagonal with entries
// sum_{ell} f_ell(a_j) f_{ell+tau}(a_j); zero beyond the model order.
// use_b additionally scales entry j by g_B(a_j) (the modulated process).
Eigen::VectorXd population_sigma(const ProcessModel& model, int tau, int p, bool use_b = false);

// C_tau = sqrt(n/p) (S_tau - Sigma_tau) with diagonal Sigma.
template <class Derived>
DenseMatrix<typename Derived::Scalar> renormalize(const Eigen::MatrixBase<Derived>& S,
                                                  const Eigen::VectorXd& sigma_diag, int n, int p) {
  if (S.rows() != S.cols() || S.rows() != sigma_diag.size())
    throw std::invalid_argument("shape mismatch between S and Sigma");
  if (n < 1 || p < 1) throw std::invalid_argument("need n, p >= 1");
  DenseMatrix<typename Derived::Scalar> C = S;
  C -= sigma_diag.asDiagonal();
  C *= std::sqrt(static_cast<double>(n) / p);
  return C;
}

// Same with a dense (user-supplied) Sigma_tau.
template <class DerivedS, class DerivedG>
DenseMatrix<typename DerivedS::Scalar> renormalize(const Eigen::MatrixBase<DerivedS>& S,
                                                   const Eigen::MatrixBase<DerivedG>& Sigma, int n,
                                                   int p) {
  if (S.rows() != Sigma.rows() || S.cols() != Sigma.cols() || S.rows() != S.cols())
    throw std::invalid_argument("shape mismatch between S and Sigma");
  if (n < 1 || p < 1) throw std::invalid_argument("need n, p >= 1");
  return std::sqrt(static_cast<double>(n) / p) * (S.derived() - Sigma.derived());
}

}  // namespace acspec
