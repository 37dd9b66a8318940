#include "acspec/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace acspec {

bool DensityCurve::complete() const {
  return std::all_of(ok.begin(), ok.end(), [](std::uint8_t b) { return b != 0; });
}

double DensityCurve::mass() const {
  double acc = 0.0;
  for (Eigen::Index k = 0; k + 1 < x.size(); ++k)
    acc += 0.5 * (f[k] + f[k + 1]) * (x[k + 1] - x[k]);
  return acc;
}

Eigen::VectorXd default_density_grid(double m2, double v) {
  const double half = 2.0 * std::sqrt(std::max(m2, 0.0)) + 0.5;
  const double dx = v / 2.0;
  const int half_steps = static_cast<int>(std::ceil(half / dx));
  Eigen::VectorXd x(2 * half_steps + 1);
  for (int k = -half_steps; k <= half_steps; ++k) x[k + half_steps] = k * dx;
  return x;
}

DensityCurve density(const Eigen::VectorXd& x, double v, const Eigen::MatrixXd& K,
                     const Eigen::VectorXd& weights, const SolverOptions& opts) {
  if (v < opts.v_min) throw std::invalid_argument("bandwidth v below the solver floor");
  for (Eigen::Index k = 0; k + 1 < x.size(); ++k)
    if (!(x[k] < x[k + 1])) throw std::invalid_argument("x grid must be strictly increasing");

  StieltjesGrid grid;
  grid.points.reserve(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) grid.points.push_back(Complex(x[k], v));
  const LsdSolution sol = continuation_solve(grid, K, weights, opts);

  DensityCurve curve;
  curve.x = x;
  curve.v_used = v;
  curve.f = Eigen::VectorXd::Zero(x.size());
  curve.ok.assign(static_cast<std::size_t>(x.size()), 0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const PointSolution& p = sol.points[static_cast<std::size_t>(k)];
    if (!p.converged) continue;
    double fk = p.s.imag() / std::numbers::pi;
    if (fk < 0.0) {
      if (fk < -1e-10) throw std::logic_error("density came out negative beyond tolerance");
      curve.clip_magnitude = std::max(curve.clip_magnitude, -fk);
      fk = 0.0;
    }
    curve.f[k] = fk;
    curve.ok[static_cast<std::size_t>(k)] = 1;
  }
  return curve;
}

std::function<double(double)> cdf_from_density(const DensityCurve& curve) {
  if (curve.x.size() < 2) throw std::invalid_argument("density curve needs at least two points");
  if (!curve.complete()) throw std::invalid_argument("density curve has unsolved points");
  const std::vector<double> x(curve.x.data(), curve.x.data() + curve.x.size());
  const std::vector<double> f(curve.f.data(), curve.f.data() + curve.f.size());
  std::vector<double> F(x.size(), 0.0);
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    F[k + 1] = F[k] + 0.5 * (f[k] + f[k + 1]) * (x[k + 1] - x[k]);
  return [x, f, F](double t) -> double {
    if (t <= x.front()) return 0.0;
    if (t >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[k + 1] - x[k];
    const double u = t - x[k];
    const double slope = (f[k + 1] - f[k]) / h;
    const double val = F[k] + f[k] * u + 0.5 * slope * u * u;
    return std::clamp(val, 0.0, 1.0);
  };
}

}  // namespace acspec
