#include "acspec/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "acspec/io.hpp"
#include "acspec/moments.hpp"
#include "acspec/parallel.hpp"
#include "acspec/simulate.hpp"

namespace acspec {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kRepStream = 0xda7a;
constexpr std::uint64_t kObsStream = 0x0b5e;
constexpr std::uint64_t kTestStream = 0x7e57;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.directory) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.output.directory);
}

// Eigenvalues of C_tau for one replicate drawn under the configured model.
Eigen::VectorXd replicate_spectrum(const RunConfig& cfg, int tau, std::uint64_t rep_seed) {
  const ProcessModel& model = cfg.model;
  const int p = cfg.sim.p, n = cfg.sim.n, qe = model.effective_q();
  const Eigen::VectorXd sigma = population_sigma(model, tau, p, cfg.sim.use_b);
  if (model.field == Field::Complex) {
    auto Z = gen_innovations<Complex>(p, n, qe, model.law, rep_seed);
    DenseMatrix<Complex> X = gen_process(model, Z);
    if (cfg.sim.use_b) X = apply_b_modulation(X, model.measure);
    return hermitian_eigenvalues(renormalize(sample_autocov(X, tau), sigma, n, p));
  }
  auto Z = gen_innovations<double>(p, n, qe, model.law, rep_seed);
  Eigen::MatrixXd X = gen_process(model, Z);
  if (cfg.sim.use_b) X = apply_b_modulation(X, model.measure);
  return hermitian_eigenvalues(renormalize(sample_autocov(X, tau), sigma, n, p));
}

void write_spectrum_csv(const RunConfig& cfg, const std::string& name, const Eigen::VectorXd& lam) {
  CsvFile csv(out_path(cfg, name), meta_line(cfg), "index,lambda");
  for (Eigen::Index i = 0; i < lam.size(); ++i) csv.row(static_cast<int>(i), lam[i]);
}

KernelMatrix tau_kernel(const RunConfig& cfg, int tau) {
  return kernel_matrix(cfg.model, tau, cfg.solver.n_quad, cfg.sim.use_b);
}

int solution_exit(const LsdSolution& sol) {
  if (sol.all_converged()) return kExitOk;
  double deepest = 0.0;
  for (const auto& p : sol.points)
    if (!p.converged) deepest = std::max(deepest, p.deepest_v);
  std::cerr << "acspec: solver did not converge on every grid point (stalled at Im z = " << deepest
            << ")\n";
  return kExitNoConvergence;
}

}  // namespace

std::vector<Complex> resolve_test_grid(const TestParams& test, double m2) {
  if (!test.grid.empty()) return test.grid;
  std::vector<Complex> grid;
  const double scale = std::sqrt(std::max(m2, 0.0));
  for (int xi = -2; xi <= 2; ++xi)
    for (double y : {0.5, 1.0}) grid.push_back(Complex(xi * scale, y));
  return grid;
}

Eigen::VectorXd resolve_density_grid(const DensityParams& density, double m2) {
  if (density.auto_grid) return default_density_grid(m2, density.v);
  const int steps = static_cast<int>(std::floor((density.x_max - density.x_min) / density.dx));
  Eigen::VectorXd x(steps + 1);
  for (int k = 0; k <= steps; ++k) x[k] = density.x_min + k * density.dx;
  return x;
}

int cmd_simulate(const RunConfig& cfg, bool dump_data) {
  ensure_out_dir(cfg);
  const ProcessModel& model = cfg.model;
  const int p = cfg.sim.p, n = cfg.sim.n, qe = model.effective_q();
  for (int rep = 0; rep < cfg.sim.replicates; ++rep) {
    const std::uint64_t rep_seed = derive_seed(cfg.sim.seed, kRepStream, static_cast<std::uint64_t>(rep));
    if (dump_data) {
      if (model.field == Field::Complex) {
        auto Z = gen_innovations<Complex>(p, n, qe, model.law, rep_seed);
        DenseMatrix<Complex> X = gen_process(model, Z);
        if (cfg.sim.use_b) X = apply_b_modulation(X, model.measure);
        write_data_matrix(out_path(cfg, "data_rep" + std::to_string(rep) + ".bin"), X);
      } else {
        auto Z = gen_innovations<double>(p, n, qe, model.law, rep_seed);
        Eigen::MatrixXd X = gen_process(model, Z);
        if (cfg.sim.use_b) X = apply_b_modulation(X, model.measure);
        write_data_matrix(out_path(cfg, "data_rep" + std::to_string(rep) + ".bin"), X);
      }
    }
    if (cfg.output.csv) {
      for (int tau : cfg.sim.taus) {
        const Eigen::VectorXd lam = replicate_spectrum(cfg, tau, rep_seed);
        write_spectrum_csv(
            cfg, "spectrum_tau" + std::to_string(tau) + "_rep" + std::to_string(rep) + ".csv", lam);
      }
    }
  }
  return kExitOk;
}

int cmd_kernel(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  for (int tau : cfg.sim.taus) {
    const KernelMatrix K = tau_kernel(cfg, tau);
    const int m = static_cast<int>(K.entries.rows());
    std::string header = "atom";
    for (int j = 0; j < m; ++j) header += ",r" + std::to_string(j);
    CsvFile csv(out_path(cfg, "kernel_tau" + std::to_string(tau) + ".csv"), meta_line(cfg), header);
    for (int i = 0; i < m; ++i) {
      std::string line;  // assembled manually: row width depends on the measure
      line += std::to_string(i);
      for (int j = 0; j < m; ++j) line += "," + format_double(K.entries(i, j));
      csv.raw_row(line);
    }
  }
  return kExitOk;
}

int cmd_lsd(const RunConfig& cfg, bool density_only) {
  ensure_out_dir(cfg);
  int exit = kExitOk;
  for (int tau : cfg.sim.taus) {
    const KernelMatrix K = tau_kernel(cfg, tau);
    const Eigen::VectorXd& w = cfg.model.measure.weights;
    const double m2 = lsd_second_moment(K.entries, w);

    if (!density_only) {
      StieltjesGrid grid;
      grid.points = resolve_test_grid(cfg.test, m2);
      const LsdSolution sol = continuation_solve(grid, K.entries, w, cfg.solver.opts);
      exit = std::max(exit, solution_exit(sol));
      CsvFile csv(out_path(cfg, "solution_tau" + std::to_string(tau) + ".csv"), meta_line(cfg),
                  "re_z,im_z,re_s,im_s,iterations,residual");
      for (const PointSolution& pt : sol.points)
        csv.row(pt.z.real(), pt.z.imag(), pt.s.real(), pt.s.imag(), pt.iterations, pt.residual);
    }

    const Eigen::VectorXd x = resolve_density_grid(cfg.density, m2);
    const DensityCurve curve = density(x, cfg.density.v, K.entries, w, cfg.solver.opts);
    if (!curve.complete()) {
      std::cerr << "acspec: density solver failed on part of the x grid (tau=" << tau << ")\n";
      exit = std::max(exit, kExitNoConvergence);
    }
    CsvFile csv(out_path(cfg, "density_tau" + std::to_string(tau) + ".csv"), meta_line(cfg),
                "x,f,v");
    for (Eigen::Index k = 0; k < curve.x.size(); ++k) csv.row(curve.x[k], curve.f[k], curve.v_used);
  }
  return exit;
}

int cmd_compare(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  int exit = kExitOk;
  CsvFile csv(out_path(cfg, "compare.csv"), meta_line(cfg), "tau,replicate,ks");
  for (int tau : cfg.sim.taus) {
    const KernelMatrix K = tau_kernel(cfg, tau);
    const Eigen::VectorXd& w = cfg.model.measure.weights;
    const double m2 = lsd_second_moment(K.entries, w);
    const DensityCurve curve =
        density(resolve_density_grid(cfg.density, m2), cfg.density.v, K.entries, w, cfg.solver.opts);
    if (!curve.complete()) {
      std::cerr << "acspec: density solver failed on part of the x grid (tau=" << tau << ")\n";
      return kExitNoConvergence;
    }
    const auto cdf = cdf_from_density(curve);
    std::vector<double> ks(static_cast<std::size_t>(cfg.sim.replicates));
    parallel_for(cfg.sim.replicates, cfg.solver.opts.threads, [&](std::int64_t rep) {
      const Eigen::VectorXd lam = replicate_spectrum(
          cfg, tau, derive_seed(cfg.sim.seed, kRepStream, static_cast<std::uint64_t>(rep)));
      ks[static_cast<std::size_t>(rep)] = ks_distance(lam, cdf);
    });
    for (int rep = 0; rep < cfg.sim.replicates; ++rep) csv.row(tau, rep, ks[static_cast<std::size_t>(rep)]);
  }
  return exit;
}

int cmd_test(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const ProcessModel& model = cfg.model;
  const int p = cfg.sim.p, n = cfg.sim.n;

  // Observed data: an external dump when configured, otherwise one simulated
  // draw of the configured model.
  Eigen::MatrixXd Xr;
  DenseMatrix<Complex> Xc;
  if (!cfg.test.data_file.empty()) {
    auto loaded = read_data_matrix(cfg.test.data_file);
    if (std::holds_alternative<Eigen::MatrixXd>(loaded)) {
      if (model.field != Field::Real) throw ConfigError("test.data_file holds real data, model is complex");
      Xr = std::get<Eigen::MatrixXd>(loaded);
    } else {
      if (model.field != Field::Complex) throw ConfigError("test.data_file holds complex data, model is real");
      Xc = std::get<DenseMatrix<Complex>>(loaded);
    }
    const Eigen::Index rows = (model.field == Field::Real) ? Xr.rows() : Xc.rows();
    const Eigen::Index cols = (model.field == Field::Real) ? Xr.cols() : Xc.cols();
    if (rows != p || cols != n) throw ConfigError("test.data_file shape disagrees with sim.p/sim.n");
  } else {
    const std::uint64_t obs_seed = derive_seed(cfg.sim.seed, kObsStream, 0);
    const int qe = model.effective_q();
    if (model.field == Field::Complex) {
      auto Z = gen_innovations<Complex>(p, n, qe, model.law, obs_seed);
      Xc = gen_process(model, Z);
      if (cfg.sim.use_b) Xc = apply_b_modulation(Xc, model.measure);
    } else {
      auto Z = gen_innovations<double>(p, n, qe, model.law, obs_seed);
      Xr = gen_process(model, Z);
      if (cfg.sim.use_b) Xr = apply_b_modulation(Xr, model.measure);
    }
  }

  for (int tau : cfg.sim.taus) {
    const KernelMatrix K = tau_kernel(cfg, tau);
    const Eigen::VectorXd& w = model.measure.weights;
    const double m2 = lsd_second_moment(K.entries, w);
    const std::vector<Complex> grid = resolve_test_grid(cfg.test, m2);

    StieltjesGrid sg;
    sg.points = grid;
    const LsdSolution sol = continuation_solve(sg, K.entries, w, cfg.solver.opts);
    if (!sol.all_converged()) return solution_exit(sol);
    Eigen::VectorXcd lsd_values(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k)
      lsd_values[static_cast<Eigen::Index>(k)] = sol.points[k].s;

    const Eigen::VectorXd sigma = population_sigma(model, tau, p, cfg.sim.use_b);
    Eigen::VectorXd lam;
    if (model.field == Field::Complex)
      lam = hermitian_eigenvalues(renormalize(sample_autocov(Xc, tau), sigma, n, p));
    else
      lam = hermitian_eigenvalues(renormalize(sample_autocov(Xr, tau), sigma, n, p));

    TestReport rep;
    rep.tau = tau;
    rep.norm = cfg.test.norm;
    rep.grid = grid;
    rep.seed = cfg.sim.seed;
    rep.statistic = gof_statistic(lam, grid, lsd_values, cfg.test.norm);
    rep.null_sample =
        null_distribution(model, p, n, tau, grid, lsd_values, cfg.test.norm, cfg.test.M,
                          derive_seed(cfg.sim.seed, kTestStream, static_cast<std::uint64_t>(tau)),
                          cfg.solver.opts.threads, cfg.sim.use_b);
    rep.p_value = mc_p_value(rep.statistic, rep.null_sample);

    if (cfg.output.json) {
      nlohmann::ordered_json out;
      out["statistic"] = rep.statistic;
      out["norm"] = norm_name(rep.norm);
      out["tau"] = tau;
      out["p_value"] = rep.p_value;
      nlohmann::ordered_json jg = nlohmann::ordered_json::array();
      for (Complex z : grid) jg.push_back({z.real(), z.imag()});
      out["grid"] = jg;
      nlohmann::ordered_json quant;
      const Eigen::Index M = rep.null_sample.size();
      for (double qq : {0.01, 0.05, 0.10, 0.50, 0.90, 0.95, 0.99}) {
        const Eigen::Index idx = std::min<Eigen::Index>(
            M - 1, static_cast<Eigen::Index>(std::llround(qq * (M - 1))));
        quant[format_double(qq)] = rep.null_sample[idx];
      }
      out["null_quantiles"] = quant;
      out["M"] = cfg.test.M;
      out["seed"] = cfg.sim.seed;
      out["config"] = hex64(cfg.hash);
      std::ofstream js(out_path(cfg, "test_tau" + std::to_string(tau) + ".json"));
      js << out.dump(2) << '\n';
    }
  }
  return kExitOk;
}

int run_command(const std::string& command, const CliOptions& cli) {
  try {
    std::ifstream in(cli.config_path);
    if (!in) throw ConfigError("cannot open config file " + cli.config_path);
    nlohmann::ordered_json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config parse error: " + std::string(e.what()));
    }
    if (cli.seed) j["sim"]["seed"] = *cli.seed;
    if (!cli.out_dir.empty()) j["output"]["directory"] = cli.out_dir;

    RunConfig cfg = parse_config(j);
    cfg.solver.opts.threads = (cli.threads > 0) ? cli.threads : default_threads();
    for (const auto& wmsg : cfg.warnings) std::cerr << "acspec: warning: " << wmsg << '\n';

    if (cli.dry_run) {
      std::cout << cfg.resolved.dump(2) << std::endl;
      return kExitOk;
    }

    if (command == "simulate") return cmd_simulate(cfg, true);
    if (command == "esd") return cmd_simulate(cfg, cfg.sim.dump_data);
    if (command == "kernel") return cmd_kernel(cfg);
    if (command == "lsd") return cmd_lsd(cfg, false);
    if (command == "density") return cmd_lsd(cfg, true);
    if (command == "compare") return cmd_compare(cfg);
    if (command == "test") return cmd_test(cfg);
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    std::cerr << "acspec: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "acspec: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    std::cerr << "acspec: " << e.what() << " (residual " << e.residual << ")\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "acspec: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace acspec
