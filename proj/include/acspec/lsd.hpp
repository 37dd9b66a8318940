#pragma once

#include <stdexcept>
#include <vector>

#include "acspec/kernel.hpp"
#include "acspec/model.hpp"

namespace acspec {

struct SolverOptions {
  double tol = 1e-10;       // sup-norm residual on beta
  int max_iter = 20000;     // per continuation level
  double damping = 0.5;     // Picard damping below v0
  double v_min = 1e-4;      // floor on Im z
  double v0 = 0.0;          // contraction threshold max{1, sqrt(2) L1}; 0 = derive from the kernel
  double descent = 0.7;     // geometric Im z step between continuation levels
  int max_projections = 10; // C+ projections tolerated per point
  int threads = 1;          // parallelism across real-part tracks
};

struct ConvergenceError : std::runtime_error {
  double residual;
  double deepest_v;
  ConvergenceError(const std::string& msg, double r, double v)
      : std::runtime_error(msg), residual(r), deepest_v(v) {}
};

// Solution of the coupled Stieltjes equations at one z.
struct PointSolution {
  Complex z{0.0, 0.0};
  Eigen::VectorXcd beta;
  Complex s{0.0, 0.0};
  int iterations = 0;            // at the level that landed on z
  double residual = 0.0;
  int total_iterations = 0;      // across all continuation levels
  int max_level_iterations = 0;
  int projections = 0;
  bool converged = false;
  double deepest_v = 0.0;        // smallest Im z reached (Im z itself on success)
};

struct StieltjesGrid {
  std::vector<Complex> points;
  void validate(double v_min) const;
};

struct LsdSolution {
  std::vector<PointSolution> points;
  bool all_converged() const;
};

// One application of the Theorem-1 map: out_i = -sum_j w_j K_ij / (z + beta_j).
Eigen::VectorXcd fixed_point_map(const Eigen::VectorXcd& beta, Complex z, const Eigen::MatrixXd& K,
                                 const Eigen::VectorXd& weights);

// Per-atom masses m_i = sum_j w_j K_ij of the beta measures.
Eigen::VectorXd kernel_mass(const Eigen::MatrixXd& K, const Eigen::VectorXd& weights);

// Second moment of the LSD, sum_ij w_i w_j K_ij.
double lsd_second_moment(const Eigen::MatrixXd& K, const Eigen::VectorXd& weights);

// s(z) = -sum_j w_j / (z + beta_j) given a solved beta.
Complex stieltjes_lsd(Complex z, const Eigen::VectorXcd& beta, const Eigen::VectorXd& weights);

// Damped Picard iteration for beta at a single z, with internal continuation
// from the contraction region when Im z is small. Throws ConvergenceError.
PointSolution solve_beta(Complex z, const Eigen::MatrixXd& K, const Eigen::VectorXd& weights,
                         const SolverOptions& opts = {});

// Closed-form scalar solution of s = -1/(z + rbar s), upper-half-plane branch.
Complex solve_scalar(Complex z, double rbar);

// Block-system solver: identical equations with K = Rbar and w = omega.
PointSolution solve_block(Complex z, const Eigen::VectorXd& omega, const Eigen::MatrixXd& rbar,
                          const SolverOptions& opts = {});

// Solves the grid, one warm-started descent track per distinct Re z; failures
// are recorded per point rather than thrown.
LsdSolution continuation_solve(const StieltjesGrid& grid, const Eigen::MatrixXd& K,
                               const Eigen::VectorXd& weights, const SolverOptions& opts = {});

}  // namespace acspec
