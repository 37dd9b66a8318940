#pragma once

#include <cstdint>
#include <functional>

#include "acspec/lsd.hpp"

namespace acspec {

// Smoothed LSD density f(x) = Im s(x + iv) / pi on a grid, together with the
// bandwidth used and a per-point solver success mask.
struct DensityCurve {
  Eigen::VectorXd x;
  Eigen::VectorXd f;
  double v_used = 0.0;
  std::vector<std::uint8_t> ok;
  double clip_magnitude = 0.0;  // largest negative value clipped to zero

  bool complete() const;
  double mass() const;  // trapezoid integral of f over the grid
};

// Default evaluation grid: the bulk support scales like 2 sqrt(m2), padded by
// half a unit, with spacing v/2 to resolve the smoothing bandwidth.
Eigen::VectorXd default_density_grid(double m2, double v);

DensityCurve density(const Eigen::VectorXd& x, double v, const Eigen::MatrixXd& K,
                     const Eigen::VectorXd& weights, const SolverOptions& opts = {});

// Cumulative trapezoid of a complete curve, clipped to [0,1] and extended by
// 0/1 outside the grid.
std::function<double(double)> cdf_from_density(const DensityCurve& curve);

}  // namespace acspec
