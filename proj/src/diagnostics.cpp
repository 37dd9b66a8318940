#include "acspec/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "acspec/moments.hpp"
#include "acspec/parallel.hpp"
#include "acspec/rng.hpp"
#include "acspec/simulate.hpp"

namespace acspec {

namespace {

constexpr std::uint64_t kNullStream = 0x6f11;
constexpr std::uint64_t kConcStream = 0xc04c;

// Simulates one Gaussian replicate of the model and returns the eigenvalues
// of C_tau (modulated when use_b is set).
Eigen::VectorXd gaussian_replicate_spectrum(const ProcessModel& model, int p, int n, int tau,
                                            std::uint64_t seed, bool use_b) {
  const int qe = model.effective_q();
  const Eigen::VectorXd sigma = population_sigma(model, tau, p, use_b);
  if (model.field == Field::Complex) {
    auto Z = gen_innovations<Complex>(p, n, qe, InnovationLaw::ComplexGaussian, seed);
    DenseMatrix<Complex> X = gen_process(model, Z);
    if (use_b) X = apply_b_modulation(X, model.measure);
    return hermitian_eigenvalues(renormalize(sample_autocov(X, tau), sigma, n, p));
  }
  auto Z = gen_innovations<double>(p, n, qe, InnovationLaw::Gaussian, seed);
  Eigen::MatrixXd X = gen_process(model, Z);
  if (use_b) X = apply_b_modulation(X, model.measure);
  return hermitian_eigenvalues(renormalize(sample_autocov(X, tau), sigma, n, p));
}

}  // namespace

double gof_statistic(const Eigen::VectorXd& spectrum, const std::vector<Complex>& grid,
                     const Eigen::VectorXcd& lsd_values, NormKind norm) {
  if (grid.empty()) throw std::invalid_argument("empty z grid");
  if (static_cast<Eigen::Index>(grid.size()) != lsd_values.size())
    throw std::invalid_argument("z grid and LSD values disagree in length");
  double sup = 0.0, l1 = 0.0, l2 = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = std::abs(empirical_stieltjes(spectrum, grid[k]) - lsd_values[k]);
    sup = std::max(sup, d);
    l1 += d;
    l2 += d * d;
  }
  switch (norm) {
    case NormKind::Sup: return sup;
    case NormKind::L1: return l1;
    case NormKind::L2: return std::sqrt(l2);
  }
  return sup;
}

double mc_p_value(double statistic, const Eigen::VectorXd& null_sample) {
  const Eigen::Index M = null_sample.size();
  if (M < 1) throw std::invalid_argument("empty null sample");
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < M; ++k)
    if (null_sample[k] >= statistic) ++count;
  return static_cast<double>(1 + count) / static_cast<double>(M + 1);
}

Eigen::VectorXd null_distribution(const ProcessModel& model, int p, int n, int tau,
                                  const std::vector<Complex>& grid,
                                  const Eigen::VectorXcd& lsd_values, NormKind norm, int M,
                                  std::uint64_t seed, int threads, bool use_b) {
  if (M < 19) throw std::invalid_argument("need at least 19 null replicates for p-value resolution");
  Eigen::VectorXd stats(M);
  parallel_for(M, threads, [&](std::int64_t k) {
    const Eigen::VectorXd lam = gaussian_replicate_spectrum(
        model, p, n, tau, derive_seed(seed, kNullStream, static_cast<std::uint64_t>(k)), use_b);
    stats[k] = gof_statistic(lam, grid, lsd_values, norm);
  });
  std::sort(stats.data(), stats.data() + stats.size());
  return stats;
}

MaOrderReport ma_order_probe(const Eigen::MatrixXd& X, int q0, int tau_max,
                             const ProcessModel& h0, const SolverOptions& sopts, int n_quad,
                             double v) {
  if (tau_max < q0 + 2) throw std::invalid_argument("need tau_max >= q0 + 2");
  const int n = static_cast<int>(X.cols());
  const int p = static_cast<int>(X.rows());
  if (n <= tau_max) throw std::invalid_argument("n too small for the requested lag range");
  if (h0.rational()) throw std::invalid_argument("MA order probe needs an MA-type null model");

  MaOrderReport rep;
  std::vector<Eigen::VectorXd> spectra;
  for (int tau = q0 + 1; tau <= tau_max; ++tau) {
    rep.taus.push_back(tau);
    const Eigen::VectorXd sigma = population_sigma(h0, tau, p);
    spectra.push_back(hermitian_eigenvalues(renormalize(sample_autocov(X, tau), sigma, n, p)));
  }
  const int k = static_cast<int>(rep.taus.size());
  rep.pairwise_ks = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double d = ks_distance(spectra[i], spectra[j]);
      rep.pairwise_ks(i, j) = d;
      rep.pairwise_ks(j, i) = d;
    }

  // Beyond q0 the kernels coincide, so one LSD serves every probed lag.
  const KernelMatrix K = kernel_matrix(h0, q0 + 1, n_quad);
  const double m2 = lsd_second_moment(K.entries, h0.measure.weights);
  const DensityCurve curve =
      density(default_density_grid(m2, v), v, K.entries, h0.measure.weights, sopts);
  const auto cdf = cdf_from_density(curve);
  rep.ks_vs_lsd.resize(k);
  for (int i = 0; i < k; ++i) rep.ks_vs_lsd[i] = ks_distance(spectra[i], cdf);
  return rep;
}

ConcentrationReport concentration_check(const ProcessModel& model, const std::vector<int>& p_list,
                                        const std::vector<int>& n_list, Complex z, int tau, int R,
                                        std::uint64_t seed, int threads) {
  if (p_list.size() < 2) throw std::invalid_argument("need at least two p values");
  if (p_list.size() != n_list.size()) throw std::invalid_argument("p and n lists disagree");
  for (std::size_t i = 0; i + 1 < p_list.size(); ++i)
    if (p_list[i] >= p_list[i + 1]) throw std::invalid_argument("p_list must be increasing");
  if (R < 2) throw std::invalid_argument("need R >= 2 replicates to estimate spread");
  if (z.imag() <= 0.0) throw std::invalid_argument("need Im z > 0");

  ConcentrationReport rep;
  rep.p_values = p_list;
  rep.n_values = n_list;
  rep.stds.resize(static_cast<Eigen::Index>(p_list.size()));
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    Eigen::VectorXd re_s(R);
    parallel_for(R, threads, [&](std::int64_t r) {
      const Eigen::VectorXd lam = gaussian_replicate_spectrum(
          model, p_list[i], n_list[i], tau,
          derive_seed(seed, kConcStream + i, static_cast<std::uint64_t>(r)), false);
      re_s[r] = empirical_stieltjes(lam, z).real();
    });
    const double mean = re_s.mean();
    rep.stds[static_cast<Eigen::Index>(i)] =
        std::sqrt((re_s.array() - mean).square().sum() / (R - 1));
  }
  rep.monotone_decreasing = true;
  for (Eigen::Index i = 0; i + 1 < rep.stds.size(); ++i)
    if (rep.stds[i + 1] >= rep.stds[i]) rep.monotone_decreasing = false;
  return rep;
}

}  // namespace acspec
