#include "acspec/kernel.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace acspec {

namespace {

Eigen::VectorXd quad_weights(int tau, int n_quad) {
  Eigen::VectorXd w(n_quad);
  for (int k = 0; k < n_quad; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_quad;
    const double c = std::cos(tau * theta);
    w[k] = c * c / n_quad;
  }
  return w;
}

void check_resolution(const ProcessModel& model, int tau, int n_quad) {
  if (model.rational()) {
    if (n_quad < 256)
      std::cerr << "acspec: warning: " << n_quad
                << " quadrature points is coarse for a rational power transfer function\n";
    return;
  }
  const int need = min_quad_points(model, tau);
  if (n_quad < need)
    throw std::invalid_argument("quadrature resolution below the trigonometric exactness threshold");
}

}  // namespace

int min_quad_points(const ProcessModel& model, int tau) {
  if (model.rational()) return 256;
  return 2 * (2 * model.effective_q() + 2 * tau) + 1;
}

int default_quad_points(const ProcessModel& model, int tau) {
  return std::max(512, min_quad_points(model, tau));
}

double kernel_entry(const ProcessModel& model, int tau, const SpectralPoint& a,
                    const SpectralPoint& b, int n_quad) {
  if (tau < 0) throw std::invalid_argument("need tau >= 0");
  if (n_quad < 1) throw std::invalid_argument("need at least one quadrature point");
  check_resolution(model, tau, n_quad);
  double acc = 0.0;
  for (int k = 0; k < n_quad; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_quad;
    const double c = std::cos(tau * theta);
    acc += c * c * power_psi(model, a, theta) * power_psi(model, b, theta);
  }
  return acc / n_quad;
}

KernelMatrix kernel_matrix(const ProcessModel& model, int tau, int n_quad, bool use_b) {
  if (tau < 0) throw std::invalid_argument("need tau >= 0");
  if (n_quad <= 0) n_quad = default_quad_points(model, tau);
  check_resolution(model, tau, n_quad);
  if (use_b && !model.measure.has_b()) throw std::invalid_argument("measure carries no b_values");

  const int m = model.measure.size();
  Eigen::MatrixXd psi(m, n_quad);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n_quad; ++k)
      psi(i, k) = power_psi(model, i, 2.0 * std::numbers::pi * k / n_quad);

  const Eigen::VectorXd w = quad_weights(tau, n_quad);
  KernelMatrix K;
  K.tau = tau;
  K.quad_points = n_quad;
  K.entries.resize(m, m);
  // One quadrature per unordered pair keeps the matrix exactly symmetric.
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double e = (psi.row(i).array() * psi.row(j).array() * w.transpose().array()).sum();
      if (use_b) e *= model.measure.b_values[i] * model.measure.b_values[j];
      K.entries(i, j) = e;
      K.entries(j, i) = e;
    }
  }
  return K;
}

KernelStabilityReport kernel_stability_check(const ProcessModel& model, int n_quad) {
  if (model.rational())
    throw std::invalid_argument("kernel lag-invariance applies to MA-type families only");
  KernelStabilityReport rep;
  rep.q = model.effective_q();
  const int n1 = (n_quad > 0) ? n_quad : default_quad_points(model, rep.q + 2);
  const Eigen::MatrixXd k1 = kernel_matrix(model, rep.q + 1, n1).entries;
  const Eigen::MatrixXd k2 = kernel_matrix(model, rep.q + 2, n1).entries;
  rep.max_abs_diff = (k1 - k2).cwiseAbs().maxCoeff();
  rep.pass = rep.max_abs_diff < 1e-12;
  return rep;
}

}  // namespace acspec
