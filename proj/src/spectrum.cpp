#include "acspec/spectrum.hpp"

#include <algorithm>
#include <vector>

namespace acspec {

Complex empirical_stieltjes(const Eigen::VectorXd& eigenvalues, Complex z) {
  if (eigenvalues.size() == 0) throw std::invalid_argument("empty spectrum");
  if (z.imag() <= 0.0) throw std::invalid_argument("need Im z > 0");
  Complex acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) acc += 1.0 / (eigenvalues[j] - z);
  return acc / static_cast<double>(eigenvalues.size());
}

double ks_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("empty spectrum");
  std::vector<double> x(a.data(), a.data() + a.size());
  std::vector<double> y(b.data(), b.data() + b.size());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return std::min(d, 1.0);
}

double ks_distance(const Eigen::VectorXd& a, const std::function<double(double)>& cdf) {
  if (a.size() == 0) throw std::invalid_argument("empty spectrum");
  std::vector<double> x(a.data(), a.data() + a.size());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    d = std::max(d, std::abs((i + 1) / n - F));
    d = std::max(d, std::abs(i / n - F));
  }
  return std::min(d, 1.0);
}

}  // namespace acspec
