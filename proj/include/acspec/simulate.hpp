#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "acspec/model.hpp"
#include "acspec/rng.hpp"

namespace acspec {

// Innovation matrix with q lead columns: column c holds time t = c - q + 1,
// so columns [q, n+q) are the observation window t = 1..n.
template <class Scalar>
struct InnovationBlock {
  DenseMatrix<Scalar> entries;
  int p = 0, n = 0, q = 0;
  InnovationLaw law = InnovationLaw::Gaussian;
  std::uint64_t seed = 0;
};

enum class ConvPath { Auto, Direct, Fft };

// Maps coordinates 1..p to atom indices by largest-remainder apportionment of
// the atom weights, in atom order.
std::vector<int> assign_atoms(const SpectralAtomMeasure& measure, int p);

// Returns the model with the filter (c_0, c_1, ...) composed on top of any
// existing filter; the transfer function becomes C(nu) * g(a, nu).
ProcessModel apply_filter(const ProcessModel& model, const std::vector<double>& c);

namespace detail {

inline int fft_size(int m) {
  int L = 1;
  while (L < m) L <<= 1;
  return L;
}

template <class Scalar>
void fill_row(DenseMatrix<Scalar>& M, Eigen::Index j, InnovationLaw law, std::mt19937_64& eng) {
  if constexpr (std::is_same_v<Scalar, double>) {
    switch (law) {
      case InnovationLaw::Gaussian: {
        std::normal_distribution<double> d(0.0, 1.0);
        for (Eigen::Index i = 0; i < M.cols(); ++i) M(j, i) = d(eng);
        return;
      }
      case InnovationLaw::Rademacher: {
        for (Eigen::Index i = 0; i < M.cols(); ++i) M(j, i) = (eng() & 1u) ? 1.0 : -1.0;
        return;
      }
      case InnovationLaw::Uniform: {
        const double b = std::sqrt(3.0);
        std::uniform_real_distribution<double> d(-b, b);
        for (Eigen::Index i = 0; i < M.cols(); ++i) M(j, i) = d(eng);
        return;
      }
      case InnovationLaw::ComplexGaussian:
        throw std::invalid_argument("complex-Gaussian innovations need a complex matrix");
    }
  } else {
    if (law != InnovationLaw::ComplexGaussian)
      throw std::invalid_argument("complex innovation matrices support the complex-Gaussian law only");
    std::normal_distribution<double> d(0.0, std::sqrt(0.5));
    for (Eigen::Index i = 0; i < M.cols(); ++i) {
      const double re = d(eng);
      const double im = d(eng);
      M(j, i) = Scalar(re, im);
    }
  }
}

}  // namespace detail

// iid innovations, one seeded stream per row; deterministic in (seed, shape).
template <class Scalar>
InnovationBlock<Scalar> gen_innovations(int p, int n, int q, InnovationLaw law, std::uint64_t seed) {
  if (p < 1 || n < 1 || q < 0) throw std::invalid_argument("need p,n >= 1 and q >= 0");
  InnovationBlock<Scalar> blk;
  blk.entries.resize(p, n + q);
  blk.p = p;
  blk.n = n;
  blk.q = q;
  blk.law = law;
  blk.seed = seed;
  for (int j = 0; j < p; ++j) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(j));
    detail::fill_row<Scalar>(blk.entries, j, law, eng);
  }
  return blk;
}

// X_{jt} = sum_ell f_ell(a_j) Z_{j,t-ell}; per-row convolution, direct for
// q*n < 2^24 and FFT above (both paths agree to 1e-10 relative).
template <class Scalar>
DenseMatrix<Scalar> gen_process(const ProcessModel& model, const InnovationBlock<Scalar>& Z,
                                ConvPath path = ConvPath::Auto) {
  const int qe = model.effective_q();
  if (Z.q != qe)
    throw std::invalid_argument("innovation block lead columns do not match the model order");
  if constexpr (std::is_same_v<Scalar, double>) {
    if (model.field != Field::Real) throw std::invalid_argument("model field is complex, data real");
  } else {
    if (model.field != Field::Complex) throw std::invalid_argument("model field is real, data complex");
  }
  const int p = Z.p, n = Z.n;
  const std::vector<int> assign = assign_atoms(model.measure, p);

  const int m = model.measure.size();
  Eigen::MatrixXd coef(m, qe + 1);
  for (int i = 0; i < m; ++i)
    for (int ell = 0; ell <= qe; ++ell) coef(i, ell) = coefficient(model, ell, i);

  if (path == ConvPath::Auto)
    path = (static_cast<long long>(qe) * n < (1LL << 24)) ? ConvPath::Direct : ConvPath::Fft;

  DenseMatrix<Scalar> X(p, n);
  if (path == ConvPath::Direct || qe == 0) {
    X.setZero();
    for (int j = 0; j < p; ++j) {
      const auto c = coef.row(assign[j]);
      for (int ell = 0; ell <= qe; ++ell) {
        if (c[ell] == 0.0) continue;
        X.row(j) += c[ell] * Z.entries.row(j).segment(qe - ell, n);
      }
    }
    return X;
  }

  const int L = detail::fft_size(n + 2 * qe + 1);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> zf(L), cf(L), prod(L), back(L);
  std::vector<std::complex<double>> ztime(L), ctime(L);
  for (int j = 0; j < p; ++j) {
    std::fill(ztime.begin(), ztime.end(), std::complex<double>(0.0, 0.0));
    for (int t = 0; t < n + qe; ++t) ztime[t] = static_cast<std::complex<double>>(Z.entries(j, t));
    std::fill(ctime.begin(), ctime.end(), std::complex<double>(0.0, 0.0));
    for (int ell = 0; ell <= qe; ++ell) ctime[ell] = coef(assign[j], ell);
    fft.fwd(zf, ztime);
    fft.fwd(cf, ctime);
    for (int k = 0; k < L; ++k) prod[k] = zf[k] * cf[k];
    fft.inv(back, prod);
    for (int t = 0; t < n; ++t) {
      if constexpr (std::is_same_v<Scalar, double>)
        X(j, t) = back[qe + t].real();
      else
        X(j, t) = back[qe + t];
    }
  }
  return X;
}

// Scales row j by sqrt(g_B(a_j)); requires modulation values on the measure.
template <class Scalar>
DenseMatrix<Scalar> apply_b_modulation(const DenseMatrix<Scalar>& X, const SpectralAtomMeasure& measure) {
  if (!measure.has_b()) throw std::invalid_argument("measure carries no b_values");
  if ((measure.b_values.array() < 0.0).any())
    throw std::invalid_argument("b_values must be nonnegative");
  const std::vector<int> assign = assign_atoms(measure, static_cast<int>(X.rows()));
  DenseMatrix<Scalar> Y = X;
  for (int j = 0; j < X.rows(); ++j) Y.row(j) *= std::sqrt(measure.b_values[assign[j]]);
  return Y;
}

// Validation helper for the diagonal-coefficient convention: conjugating the
// data by a Haar-random unitary (orthogonal in the real case) conjugates S_tau
// and Sigma_tau alike and leaves the spectrum of C_tau unchanged.
Eigen::MatrixXd haar_orthogonal(int p, std::uint64_t seed);
Eigen::MatrixXcd haar_unitary(int p, std::uint64_t seed);

template <class Scalar>
DenseMatrix<Scalar> conjugate_by_random_unitary(const DenseMatrix<Scalar>& X, std::uint64_t seed) {
  if constexpr (std::is_same_v<Scalar, double>)
    return haar_orthogonal(static_cast<int>(X.rows()), seed) * X;
  else
    return haar_unitary(static_cast<int>(X.rows()), seed) * X;
}

enum class PerturbMode { LowRank, SmallNorm };

// Coefficient-perturbation scenario generator: replaces each A_ell (ell >= 1)
// by B_ell = A_ell + Delta_ell, with Delta_ell either a sum of ceil(magnitude)
// unit-norm rank-one spikes or a random symmetric matrix of operator norm
// magnitude * sqrt(p/n) / q.
class PerturbedProcess {
 public:
  PerturbedProcess(ProcessModel model, int p, int n, PerturbMode mode, double magnitude,
                   std::uint64_t seed);

  Eigen::MatrixXd generate(const InnovationBlock<double>& Z, ConvPath path = ConvPath::Auto) const;

  // Materializes Delta_ell (ell in 1..effective_q) for inspection.
  Eigen::MatrixXd delta(int ell) const;
  const ProcessModel& base() const { return model_; }

 private:
  ProcessModel model_;
  int p_ = 0, n_ = 0;
  PerturbMode mode_ = PerturbMode::LowRank;
  double magnitude_ = 0.0;
  std::vector<Eigen::MatrixXd> spikes_;  // p x r factor per lag, Delta = U U^T
  std::vector<Eigen::MatrixXd> dense_;   // dense symmetric Delta per lag
};

}  // namespace acspec
