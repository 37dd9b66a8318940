#pragma once

#include <cstdint>
#include <vector>

#include "acspec/inversion.hpp"
#include "acspec/lsd.hpp"
#include "acspec/model.hpp"
#include "acspec/spectrum.hpp"

namespace acspec {

enum class NormKind { Sup, L1, L2 };

// Combined deviation between the empirical and limiting Stieltjes transforms
// over a fixed z grid: norm of (|s_hat(z_k) - s(z_k)|)_k.
double gof_statistic(const Eigen::VectorXd& spectrum, const std::vector<Complex>& grid,
                     const Eigen::VectorXcd& lsd_values, NormKind norm);

// Add-one Monte Carlo p-value, (1 + #{null >= statistic}) / (M + 1).
double mc_p_value(double statistic, const Eigen::VectorXd& null_sample);

// M goodness-of-fit statistics from Gaussian-innovation replicates of the
// null model (Gaussian regardless of the model's own law). Sorted ascending;
// deterministic in seed and independent of thread count.
Eigen::VectorXd null_distribution(const ProcessModel& model, int p, int n, int tau,
                                  const std::vector<Complex>& grid,
                                  const Eigen::VectorXcd& lsd_values, NormKind norm, int M,
                                  std::uint64_t seed, int threads = 1, bool use_b = false);

struct TestReport {
  double statistic = 0.0;
  NormKind norm = NormKind::Sup;
  int tau = 0;
  std::vector<Complex> grid;
  Eigen::VectorXd null_sample;  // sorted
  double p_value = 1.0;
  std::uint64_t seed = 0;
};

// (1/p) ||C||_F^2 = (1/p) sum lambda_j^2; compares against lsd_second_moment.
template <class Derived>
double frobenius_fluctuation(const Eigen::MatrixBase<Derived>& C) {
  return C.squaredNorm() / static_cast<double>(C.rows());
}

struct MaOrderReport {
  std::vector<int> taus;          // q0+1 .. tau_max
  Eigen::MatrixXd pairwise_ks;    // KS distances between the C_tau spectra
  Eigen::VectorXd ks_vs_lsd;      // each spectrum against the common LSD
};

// Probes whether data is compatible with an MA(q0) null: the spectra of
// C_tau must coincide (and match the common LSD) for all tau > q0.
MaOrderReport ma_order_probe(const Eigen::MatrixXd& X, int q0, int tau_max,
                             const ProcessModel& h0, const SolverOptions& sopts = {},
                             int n_quad = 0, double v = 1e-3);

struct ConcentrationReport {
  std::vector<int> p_values;
  std::vector<int> n_values;
  Eigen::VectorXd stds;          // sample std of Re s_{tau,p}(z) per p
  bool monotone_decreasing = false;
};

// Spread of the empirical Stieltjes transform across replicates as p grows.
ConcentrationReport concentration_check(const ProcessModel& model, const std::vector<int>& p_list,
                                        const std::vector<int>& n_list, Complex z, int tau, int R,
                                        std::uint64_t seed, int threads = 1);

}  // namespace acspec
