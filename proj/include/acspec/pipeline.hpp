#pragma once

#include <optional>
#include <string>

#include "acspec/config.hpp"

namespace acspec {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty = take from config
  int threads = 0;      // 0 = hardware concurrency
  bool dry_run = false;
};

// Exit codes: 0 success, 2 validation error, 3 solver non-convergence,
// 1 unexpected failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoConvergence = 3;

int cmd_simulate(const RunConfig& cfg, bool dump_data);
int cmd_kernel(const RunConfig& cfg);
int cmd_lsd(const RunConfig& cfg, bool density_only);
int cmd_compare(const RunConfig& cfg);
int cmd_test(const RunConfig& cfg);

// Loads the config, applies CLI overrides (seed, output dir, threads), prints
// warnings, and dispatches one of: simulate, esd, kernel, lsd, density,
// compare, test.
int run_command(const std::string& command, const CliOptions& cli);

// Test z grid: configured points, or the auto rule
// {-2,-1,0,1,2} * sqrt(m2) x {0.5i, 1i}.
std::vector<Complex> resolve_test_grid(const TestParams& test, double m2);

// Density x grid: configured range, or +-(2 sqrt(m2) + 1/2) at spacing dx.
Eigen::VectorXd resolve_density_grid(const DensityParams& density, double m2);

}  // namespace acspec
