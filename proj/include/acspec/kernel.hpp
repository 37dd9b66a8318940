#pragma once

#include "acspec/model.hpp"

namespace acspec {

// Atom-level kernel matrix K_ij = R_tau(a_i, a_j), optionally modulated to
// g_B(a_i) g_B(a_j) R_tau(a_i, a_j). Symmetric with strictly positive entries.
struct KernelMatrix {
  Eigen::MatrixXd entries;
  int tau = 0;
  int quad_points = 0;
};

// Quadrature resolution: MA-type integrands are trigonometric polynomials of
// degree 2q + 2 tau, where the periodic trapezoid rule with
// N >= 2(2q + 2 tau) + 1 nodes is exact; rational families get N >= 512.
int default_quad_points(const ProcessModel& model, int tau);
int min_quad_points(const ProcessModel& model, int tau);

// R_tau(a,b) = (1/2 pi) int_0^{2 pi} cos^2(tau t) psi(a,t) psi(b,t) dt by the
// N-point periodic trapezoid rule. Throws below the exactness threshold for
// MA-type families; warns (stderr) below N = 256 for rational ones.
double kernel_entry(const ProcessModel& model, int tau, const SpectralPoint& a,
                    const SpectralPoint& b, int n_quad);

KernelMatrix kernel_matrix(const ProcessModel& model, int tau, int n_quad = 0, bool use_b = false);

struct KernelStabilityReport {
  int q = 0;
  double max_abs_diff = 0.0;
  bool pass = false;
};

// For an MA-type model the kernel is lag-invariant beyond the order: compares
// the kernel matrices at tau = q+1 and tau = q+2 entrywise.
KernelStabilityReport kernel_stability_check(const ProcessModel& model, int n_quad = 0);

}  // namespace acspec
