#include "acspec/lsd.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "acspec/parallel.hpp"

namespace acspec {

namespace {

void check_kernel(const Eigen::MatrixXd& K, const Eigen::VectorXd& w) {
  if (K.rows() != K.cols() || K.rows() != w.size())
    throw std::invalid_argument("kernel/weight shape mismatch");
  if (!K.allFinite() || !w.allFinite()) throw std::invalid_argument("non-finite kernel input");
}

struct LevelStats {
  int iterations = 0;
  double residual = 0.0;
  int projections = 0;
  bool converged = false;
};

// Damped Picard at fixed z. beta is updated in place and stays in C+.
LevelStats run_level(Complex z, Eigen::VectorXcd& beta, const Eigen::MatrixXd& K,
                     const Eigen::VectorXd& w, const SolverOptions& opts, double v0_eff) {
  LevelStats st;
  const double eta = (z.imag() >= v0_eff) ? 1.0 : opts.damping;
  Eigen::VectorXcd tb(beta.size());
  for (int it = 1; it <= opts.max_iter; ++it) {
    tb = fixed_point_map(beta, z, K, w);
    st.residual = (beta - tb).cwiseAbs().maxCoeff();
    st.iterations = it;
    if (st.residual <= opts.tol) {
      st.converged = true;
      return st;
    }
    beta = (1.0 - eta) * beta + eta * tb;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      if (beta[i].imag() <= 0.0) {
        beta[i].imag(1e-14);
        ++st.projections;
      }
    }
    if (st.projections > opts.max_projections) return st;
  }
  return st;
}

double start_imag(const Eigen::MatrixXd& K, const Eigen::VectorXd& w, const SolverOptions& opts) {
  const double m_max = kernel_mass(K, w).maxCoeff();
  // Plain iteration is a sup-norm contraction once m_max / v^2 <= 1/4; the
  // analytic threshold max{1, sqrt(2) L1} is honored when the caller knows L1.
  double v = std::max(1.0, 2.0 * std::sqrt(std::max(m_max, 0.0)));
  v = std::max(v, opts.v0);
  return v;
}

double contraction_v0(const Eigen::MatrixXd& K, const SolverOptions& opts) {
  if (opts.v0 > 0.0) return opts.v0;
  const double kmax = K.cwiseAbs().maxCoeff();
  return std::max(1.0, std::sqrt(2.0) * std::pow(kmax, 0.25));
}

struct TrackResult {
  std::vector<PointSolution> points;  // aligned with track targets
};

// Descends one real-part track, recording a solution at every target Im z.
TrackResult solve_track(double x, const std::vector<std::pair<double, int>>& targets_desc,
                        const Eigen::MatrixXd& K, const Eigen::VectorXd& w,
                        const SolverOptions& opts) {
  TrackResult out;
  out.points.resize(targets_desc.size());
  const Eigen::VectorXd mass = kernel_mass(K, w);
  const double v0_eff = contraction_v0(K, opts);
  double v_start = std::max(start_imag(K, w, opts), targets_desc.front().first);

  Eigen::VectorXcd beta = Complex(0.0, 1.0) * mass;
  int total_iters = 0, max_level_iters = 0, projections = 0;
  bool dead = false;
  double v = v_start;
  LevelStats st = run_level(Complex(x, v), beta, K, w, opts, v0_eff);
  total_iters += st.iterations;
  max_level_iters = st.iterations;
  projections += st.projections;
  dead = !st.converged;

  for (std::size_t t = 0; t < targets_desc.size(); ++t) {
    const double v_target = targets_desc[t].first;
    while (!dead && v > v_target * (1.0 + 1e-12)) {
      v = std::max(v_target, opts.descent * v);
      st = run_level(Complex(x, v), beta, K, w, opts, v0_eff);
      total_iters += st.iterations;
      max_level_iters = std::max(max_level_iters, st.iterations);
      projections += st.projections;
      if (!st.converged) dead = true;
    }
    PointSolution& ps = out.points[t];
    ps.z = Complex(x, v_target);
    ps.deepest_v = v;
    ps.iterations = st.iterations;
    ps.residual = st.residual;
    ps.total_iterations = total_iters;
    ps.max_level_iterations = max_level_iters;
    ps.projections = projections;
    if (!dead) {
      ps.beta = beta;
      ps.s = stieltjes_lsd(ps.z, beta, w);
      ps.converged = (ps.beta.imag().array() > 0.0).all() && ps.s.imag() > 0.0;
    }
  }
  return out;
}

}  // namespace

void StieltjesGrid::validate(double v_min) const {
  if (points.empty()) throw std::invalid_argument("empty Stieltjes grid");
  for (Complex z : points) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("non-finite grid point");
    if (z.imag() < v_min) throw std::invalid_argument("grid point below the Im z floor");
  }
}

bool LsdSolution::all_converged() const {
  return std::all_of(points.begin(), points.end(),
                     [](const PointSolution& p) { return p.converged; });
}

Eigen::VectorXcd fixed_point_map(const Eigen::VectorXcd& beta, Complex z, const Eigen::MatrixXd& K,
                                 const Eigen::VectorXd& weights) {
  check_kernel(K, weights);
  if (beta.size() != weights.size()) throw std::invalid_argument("beta length mismatch");
  if (z.imag() <= 0.0) throw std::invalid_argument("need Im z > 0");
  Eigen::VectorXcd resolvent(beta.size());
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const Complex d = z + beta[j];
    if (d == Complex(0.0, 0.0)) throw std::domain_error("pole in the fixed point map");
    resolvent[j] = weights[j] / d;
  }
  return -(K * resolvent);
}

Eigen::VectorXd kernel_mass(const Eigen::MatrixXd& K, const Eigen::VectorXd& weights) {
  check_kernel(K, weights);
  return K * weights;
}

double lsd_second_moment(const Eigen::MatrixXd& K, const Eigen::VectorXd& weights) {
  check_kernel(K, weights);
  return weights.dot(K * weights);
}

Complex stieltjes_lsd(Complex z, const Eigen::VectorXcd& beta, const Eigen::VectorXd& weights) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < beta.size(); ++j) acc += weights[j] / (z + beta[j]);
  return -acc;
}

PointSolution solve_beta(Complex z, const Eigen::MatrixXd& K, const Eigen::VectorXd& weights,
                         const SolverOptions& opts) {
  check_kernel(K, weights);
  if (z.imag() < opts.v_min) throw std::invalid_argument("Im z below the solver floor");
  StieltjesGrid g;
  g.points = {z};
  LsdSolution sol = continuation_solve(g, K, weights, opts);
  PointSolution& p = sol.points.front();
  if (!p.converged)
    throw ConvergenceError("fixed point iteration did not converge", p.residual, p.deepest_v);
  return p;
}

Complex solve_scalar(Complex z, double rbar) {
  if (rbar <= 0.0) throw std::invalid_argument("need rbar > 0");
  if (z.imag() <= 0.0) throw std::invalid_argument("need Im z > 0");
  // rbar s^2 + z s + 1 = 0; exactly one root lies in C+.
  const Complex disc = std::sqrt(z * z - 4.0 * rbar);
  const Complex s1 = (-z + disc) / (2.0 * rbar);
  const Complex s2 = (-z - disc) / (2.0 * rbar);
  return (s1.imag() > 0.0) ? s1 : s2;
}

PointSolution solve_block(Complex z, const Eigen::VectorXd& omega, const Eigen::MatrixXd& rbar,
                          const SolverOptions& opts) {
  if ((omega.array() <= 0.0).any()) throw std::invalid_argument("block weights must be positive");
  if (std::abs(omega.sum() - 1.0) > 1e-12) throw std::invalid_argument("block weights must sum to one");
  if ((rbar.array() <= 0.0).any()) throw std::invalid_argument("block kernel must be positive");
  if ((rbar - rbar.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("block kernel must be symmetric");
  return solve_beta(z, rbar, omega, opts);
}

LsdSolution continuation_solve(const StieltjesGrid& grid, const Eigen::MatrixXd& K,
                               const Eigen::VectorXd& weights, const SolverOptions& opts) {
  check_kernel(K, weights);
  grid.validate(opts.v_min);

  std::map<double, std::vector<std::pair<double, int>>> tracks;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    tracks[grid.points[i].real()].push_back({grid.points[i].imag(), static_cast<int>(i)});

  std::vector<std::pair<double, std::vector<std::pair<double, int>>>> track_list;
  track_list.reserve(tracks.size());
  for (auto& [x, ts] : tracks) {
    std::sort(ts.begin(), ts.end(), std::greater<>());
    track_list.push_back({x, std::move(ts)});
  }

  LsdSolution sol;
  sol.points.resize(grid.points.size());
  parallel_for(static_cast<std::int64_t>(track_list.size()), opts.threads, [&](std::int64_t k) {
    const auto& [x, targets] = track_list[static_cast<std::size_t>(k)];
    TrackResult tr = solve_track(x, targets, K, weights, opts);
    for (std::size_t t = 0; t < targets.size(); ++t)
      sol.points[static_cast<std::size_t>(targets[t].second)] = std::move(tr.points[t]);
  });
  return sol;
}

}  // namespace acspec
