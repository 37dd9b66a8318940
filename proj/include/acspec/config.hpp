#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "acspec/diagnostics.hpp"
#include "acspec/lsd.hpp"
#include "acspec/model.hpp"

namespace acspec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimParams {
  int p = 0, n = 0;
  std::vector<int> taus{0};
  std::uint64_t seed = 1;
  int replicates = 1;
  bool use_b = false;
  bool dump_data = false;
};

struct SolverParams {
  SolverOptions opts;
  int n_quad = 0;  // 0 = auto per (model, tau)
};

struct DensityParams {
  double v = 1e-3;
  double dx = 0.0;     // 0 = v/2
  double x_min = 0.0;  // used only when auto_grid is false
  double x_max = 0.0;
  bool auto_grid = true;
};

struct TestParams {
  std::vector<Complex> grid;  // empty = auto rule from the LSD second moment
  NormKind norm = NormKind::Sup;
  int M = 199;
  std::string data_file;  // optional observed-data dump
};

struct OutputParams {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

// Fully validated run description: the strict-schema JSON config with every
// default materialized, plus the derived process model.
struct RunConfig {
  ProcessModel model;
  SimParams sim;
  SolverParams solver;
  DensityParams density;
  TestParams test;
  OutputParams output;
  nlohmann::ordered_json resolved;
  std::uint64_t hash = 0;
  std::vector<std::string> warnings;
};

RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

std::string meta_line(const RunConfig& cfg);

const char* norm_name(NormKind k);

}  // namespace acspec
