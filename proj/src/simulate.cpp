#include "acspec/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acspec {

std::vector<int> assign_atoms(const SpectralAtomMeasure& measure, int p) {
  measure.validate();
  if (p < 1) throw std::invalid_argument("need p >= 1");
  const int m = measure.size();
  std::vector<int> counts(m, 0);
  std::vector<std::pair<double, int>> rem(m);
  int assigned = 0;
  for (int i = 0; i < m; ++i) {
    const double quota = measure.weights[i] * p;
    counts[i] = static_cast<int>(std::floor(quota));
    rem[i] = {quota - counts[i], i};
    assigned += counts[i];
  }
  // Largest fractional remainders pick up the leftover seats; ties go to the
  // earlier atom so the assignment is deterministic.
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; k < p - assigned; ++k) ++counts[rem[k].second];

  std::vector<int> out;
  out.reserve(p);
  for (int i = 0; i < m; ++i) out.insert(out.end(), counts[i], i);
  return out;
}

ProcessModel apply_filter(const ProcessModel& model, const std::vector<double>& c) {
  if (c.empty()) throw std::invalid_argument("filter coefficient list must not be empty");
  ProcessModel out = model;
  std::vector<double> conv(model.filter.size() + c.size() - 1, 0.0);
  for (std::size_t i = 0; i < model.filter.size(); ++i)
    for (std::size_t k = 0; k < c.size(); ++k) conv[i + k] += model.filter[i] * c[k];
  out.filter = std::move(conv);
  out.validate();
  return out;
}

Eigen::MatrixXd haar_orthogonal(int p, std::uint64_t seed) {
  auto eng = make_engine(seed, 0x4aa2);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd G(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) G(i, j) = d(eng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

Eigen::MatrixXcd haar_unitary(int p, std::uint64_t seed) {
  auto eng = make_engine(seed, 0x4aa2);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXcd G(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) G(i, j) = Complex(d(eng), d(eng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ();
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    const Complex r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }
  return Q;
}

PerturbedProcess::PerturbedProcess(ProcessModel model, int p, int n, PerturbMode mode,
                                   double magnitude, std::uint64_t seed)
    : model_(std::move(model)), p_(p), n_(n), mode_(mode), magnitude_(magnitude) {
  if (model_.field != Field::Real)
    throw std::invalid_argument("perturbation scenarios support real-field models only");
  if (magnitude < 0.0) throw std::invalid_argument("magnitude must be nonnegative");
  const int qe = model_.effective_q();
  if (magnitude_ == 0.0 || qe == 0) return;

  if (mode_ == PerturbMode::LowRank) {
    const int r = static_cast<int>(std::ceil(magnitude_));
    spikes_.reserve(qe);
    for (int ell = 1; ell <= qe; ++ell) {
      auto eng = make_engine(seed, 0x5eedULL, static_cast<std::uint64_t>(ell));
      std::normal_distribution<double> d(0.0, 1.0);
      Eigen::MatrixXd U(p, r);
      for (int k = 0; k < r; ++k) {
        for (int j = 0; j < p; ++j) U(j, k) = d(eng);
        U.col(k).normalize();
      }
      spikes_.push_back(std::move(U));
    }
  } else {
    const double target = magnitude_ * std::sqrt(static_cast<double>(p) / n) / qe;
    dense_.reserve(qe);
    for (int ell = 1; ell <= qe; ++ell) {
      auto eng = make_engine(seed, 0x5eedULL, static_cast<std::uint64_t>(ell));
      std::normal_distribution<double> d(0.0, 1.0);
      Eigen::MatrixXd W(p, p);
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) W(j, k) = d(eng);
      Eigen::MatrixXd G = 0.5 * (W + W.transpose());
      const double nrm =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .cwiseAbs()
              .maxCoeff();
      G *= target / nrm;
      dense_.push_back(std::move(G));
    }
  }
}

Eigen::MatrixXd PerturbedProcess::generate(const InnovationBlock<double>& Z, ConvPath path) const {
  if (Z.p != p_ || Z.n != n_) throw std::invalid_argument("innovation block shape mismatch");
  Eigen::MatrixXd X = gen_process(model_, Z, path);
  const int qe = model_.effective_q();
  if (spikes_.empty() && dense_.empty()) return X;
  for (int ell = 1; ell <= qe; ++ell) {
    const auto Zs = Z.entries.middleCols(qe - ell, n_);
    if (mode_ == PerturbMode::LowRank) {
      const Eigen::MatrixXd& U = spikes_[ell - 1];
      X.noalias() += U * (U.transpose() * Zs);
    } else {
      X.noalias() += dense_[ell - 1] * Zs;
    }
  }
  return X;
}

Eigen::MatrixXd PerturbedProcess::delta(int ell) const {
  if (ell < 1 || ell > model_.effective_q()) throw std::invalid_argument("lag out of range");
  if (spikes_.empty() && dense_.empty()) return Eigen::MatrixXd::Zero(p_, p_);
  if (mode_ == PerturbMode::LowRank) {
    const Eigen::MatrixXd& U = spikes_[ell - 1];
    return U * U.transpose();
  }
  return dense_[ell - 1];
}

}  // namespace acspec
