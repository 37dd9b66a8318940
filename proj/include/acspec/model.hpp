#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace acspec {

using Complex = std::complex<double>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Family { Identity, MA, AR1, ARMA11, Block };
enum class InnovationLaw { Gaussian, ComplexGaussian, Rademacher, Uniform };
enum class Field { Real, Complex };

// A point in the spectral-parameter space R^{m0}. For MA(q) the coordinates
// are the moving-average coefficients (f_1,...,f_q), for AR(1) the single
// autoregressive root, for ARMA(1,1) the pair (phi, theta), and for the block
// family an arbitrary block label.
using SpectralPoint = Eigen::VectorXd;

// Discrete spectral parameter measure: weighted atoms in R^{m0}, optionally
// carrying nonnegative modulation values g_B(a_i) for scaled processes.
struct SpectralAtomMeasure {
  std::vector<SpectralPoint> atoms;
  Eigen::VectorXd weights;
  Eigen::VectorXd b_values;  // empty unless modulated

  int size() const { return static_cast<int>(atoms.size()); }
  int m0() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }
  bool has_b() const { return b_values.size() > 0; }

  // Throws std::invalid_argument on violated invariants (weights must sum to
  // one within 1e-12, all weights in (0,1], consistent atom dimensions,
  // b_values nonnegative and not all zero when present).
  void validate() const;
};

SpectralAtomMeasure single_atom(double coord, double b_value = -1.0);
SpectralAtomMeasure atoms_1d(const std::vector<double>& coords, const std::vector<double>& weights);

// Linear process family with diagonal coefficient structure: coordinate j of
// the process carries scalar coefficients f_ell(a_j) determined by the family
// and the atom a_j assigned to it. An optional linear filter (c_0, c_1, ...)
// composes on top, turning every transfer function g into C(nu) * g.
struct ProcessModel {
  Family family = Family::Identity;
  int q = 0;  // MA order; truncation order used in simulation for AR1/ARMA11
  SpectralAtomMeasure measure;
  InnovationLaw law = InnovationLaw::Gaussian;
  Field field = Field::Real;
  Eigen::MatrixXd block_coeffs;      // Block family: rows = atoms, cols = f_1..f_q
  std::vector<double> filter{1.0};   // filter coefficients, {1} = no filter

  // Largest |phi| over atoms for the rational families, 0 otherwise.
  double rho_max() const;
  // Coefficient bound \bar a_ell of the unfiltered family (\bar a_0 = 1).
  double coefficient_bound(int ell) const;
  // L1 = sum of filtered coefficient bounds; finite for every valid model.
  double l1_bound() const;
  // Highest lag with a (possibly) nonzero simulated coefficient.
  int effective_q() const { return q + static_cast<int>(filter.size()) - 1; }
  bool rational() const { return family == Family::AR1 || family == Family::ARMA11; }

  void validate() const;
};

ProcessModel make_identity();
ProcessModel make_ma(SpectralAtomMeasure measure, int q);
ProcessModel make_ar1(SpectralAtomMeasure measure, int q);
ProcessModel make_arma11(SpectralAtomMeasure measure, int q);
ProcessModel make_block(SpectralAtomMeasure measure, Eigen::MatrixXd coeffs);

// Filtered process coefficient (c * f)_ell evaluated at a spectral point or
// directly at an atom index (required for the tabulated block family).
// f_0 = 1 for every family; lags beyond the family order return 0.
double coefficient(const ProcessModel& model, int ell, const SpectralPoint& a);
double coefficient(const ProcessModel& model, int ell, int atom_index);

// Transfer function C(nu) * sum_ell f_ell(a) e^{i ell nu}; closed-form rational
// expression for AR1/ARMA11, finite sum otherwise. nu in radians.
Complex transfer_g(const ProcessModel& model, const SpectralPoint& a, double nu);
Complex transfer_g(const ProcessModel& model, int atom_index, double nu);

// Power transfer function |g|^2; strictly positive, bounded by l1_bound()^2.
double power_psi(const ProcessModel& model, const SpectralPoint& a, double nu);
double power_psi(const ProcessModel& model, int atom_index, double nu);

// Smallest q with rho_max^{q+1}/(1-rho_max) < eps; if p > 0 the result is
// capped at 4 * ceil(p^{1/4}) and *capped is set when the cap binds.
int truncation_order(double rho_max, double eps, int p = -1, bool* capped = nullptr);

}  // namespace acspec
