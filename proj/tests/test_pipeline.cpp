#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acspec/io.hpp"
#include "acspec/lsd.hpp"
#include "acspec/pipeline.hpp"

using namespace acspec;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig make_cfg(ordered_json j, const std::string& out_dir) {
  j["output"]["directory"] = out_dir;
  RunConfig cfg = parse_config(j);
  cfg.solver.opts.threads = 2;
  return cfg;
}

ordered_json identity_cfg(int p, int n) {
  ordered_json j = ordered_json::parse(R"({
    "model": {"family": "identity"},
    "sim": {"p": 2, "n": 4, "seed": 42},
    "output": {}
  })");
  j["sim"]["p"] = p;
  j["sim"]["n"] = n;
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate produces deterministic files per lag and replicate") {
  TempDir tmp("acspec_pipe_sim");
  ordered_json j = identity_cfg(2, 4);
  j["sim"]["taus"] = {0, 1, 2};
  j["sim"]["replicates"] = 3;

  RunConfig cfg = make_cfg(j, (tmp.path / "a").string());
  REQUIRE(cmd_simulate(cfg, true) == kExitOk);
  for (int tau : {0, 1, 2})
    for (int rep : {0, 1, 2})
      CHECK(fs::exists(tmp.path / "a" /
                       ("spectrum_tau" + std::to_string(tau) + "_rep" + std::to_string(rep) + ".csv")));
  CHECK(fs::exists(tmp.path / "a" / "data_rep0.bin"));
  CHECK(fs::exists(tmp.path / "a" / "data_rep2.bin"));

  RunConfig cfg2 = make_cfg(j, (tmp.path / "b").string());
  REQUIRE(cmd_simulate(cfg2, true) == kExitOk);
  CHECK(slurp(tmp.path / "a" / "data_rep1.bin") == slurp(tmp.path / "b" / "data_rep1.bin"));
  CHECK(slurp(tmp.path / "a" / "spectrum_tau1_rep1.csv") ==
        slurp(tmp.path / "b" / "spectrum_tau1_rep1.csv"));
}

TEST_CASE("lsd command reproduces the scalar closed form column for column") {
  TempDir tmp("acspec_pipe_lsd");
  ordered_json j = identity_cfg(16, 256);
  RunConfig cfg = make_cfg(j, tmp.path.string());
  REQUIRE(cmd_lsd(cfg, false) == kExitOk);

  std::ifstream in(tmp.path / "solution_tau0.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // metadata
  std::getline(in, line);
  CHECK(line == "re_z,im_z,re_s,im_s,iterations,residual");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 6);
    const Complex z(vals[0], vals[1]);
    const Complex s = solve_scalar(z, 1.0);  // identity, lag 0: Rbar = 1
    CHECK(std::abs(Complex(vals[2], vals[3]) - s) <= 1e-9);
    CHECK(vals[5] <= 1e-10);
    ++rows;
  }
  CHECK(rows == 10);  // auto grid: 5 real parts x 2 heights
  CHECK(fs::exists(tmp.path / "density_tau0.csv"));
}

TEST_CASE("test command emits a reproducible JSON report") {
  TempDir tmp("acspec_pipe_test");
  ordered_json j = ordered_json::parse(R"({
    "model": {"family": "ma", "atoms": [{"coords": [0.5], "weight": 0.5},
                                         {"coords": [-0.5], "weight": 0.5}]},
    "sim": {"p": 24, "n": 256, "seed": 5},
    "test": {"M": 39},
    "output": {}
  })");
  RunConfig cfg = make_cfg(j, (tmp.path / "r1").string());
  REQUIRE(cmd_test(cfg) == kExitOk);
  RunConfig cfg2 = make_cfg(j, (tmp.path / "r2").string());
  REQUIRE(cmd_test(cfg2) == kExitOk);

  const std::string rep1 = slurp(tmp.path / "r1" / "test_tau0.json");
  CHECK(rep1 == slurp(tmp.path / "r2" / "test_tau0.json"));

  const ordered_json parsed = ordered_json::parse(rep1);
  const double pv = parsed.at("p_value").get<double>();
  CHECK(pv >= 1.0 / 40.0);
  CHECK(pv <= 1.0);
  const double lattice = pv * 40.0;
  CHECK(std::abs(lattice - std::round(lattice)) < 1e-9);
  CHECK(parsed.contains("null_quantiles"));
  CHECK(parsed.at("grid").size() == 10);
}

TEST_CASE("compare command reports KS distances") {
  TempDir tmp("acspec_pipe_cmp");
  ordered_json j = identity_cfg(64, 2048);
  j["sim"]["replicates"] = 2;
  RunConfig cfg = make_cfg(j, tmp.path.string());
  REQUIRE(cmd_compare(cfg) == kExitOk);
  std::ifstream in(tmp.path / "compare.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "tau,replicate,ks");
  int rows = 0;
  while (std::getline(in, line)) {
    const double ks = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(ks < 0.25);
    CHECK(ks >= 0.0);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("run_command handles overrides, dry runs, and bad input") {
  TempDir tmp("acspec_pipe_cli");
  const fs::path cfg_path = tmp.path / "cfg.json";
  {
    std::ofstream out(cfg_path);
    out << identity_cfg(2, 4).dump();
  }

  CliOptions dry;
  dry.config_path = cfg_path.string();
  dry.dry_run = true;
  CHECK(run_command("simulate", dry) == kExitOk);

  CliOptions missing;
  missing.config_path = (tmp.path / "nope.json").string();
  CHECK(run_command("simulate", missing) == kExitValidation);

  {
    std::ofstream out(tmp.path / "broken.json");
    out << "{ not json";
  }
  CliOptions broken;
  broken.config_path = (tmp.path / "broken.json").string();
  CHECK(run_command("simulate", broken) == kExitValidation);

  {
    ordered_json j = identity_cfg(2, 4);
    j["sim"]["taus"] = {9};  // tau >= n
    std::ofstream out(tmp.path / "invalid.json");
    out << j.dump();
  }
  CliOptions invalid;
  invalid.config_path = (tmp.path / "invalid.json").string();
  CHECK(run_command("simulate", invalid) == kExitValidation);

  CliOptions run;
  run.config_path = cfg_path.string();
  run.out_dir = (tmp.path / "seeded").string();
  run.seed = 777;
  run.threads = 1;
  CHECK(run_command("esd", run) == kExitOk);
  const std::string csv = slurp(tmp.path / "seeded" / "spectrum_tau0_rep0.csv");
  CHECK(csv.find("seed=777") != std::string::npos);
  CHECK(run_command("bogus", run) == kExitValidation);
}

TEST_CASE("complex-field configs run end to end") {
  TempDir tmp("acspec_pipe_cplx");
  const ordered_json j = ordered_json::parse(R"({
    "model": {"family": "ma", "field": "complex",
              "atoms": [{"coords": [0.4], "weight": 1.0}]},
    "sim": {"p": 12, "n": 128, "taus": [0, 1], "seed": 3},
    "test": {"M": 19},
    "output": {}
  })");
  RunConfig cfg = make_cfg(j, tmp.path.string());
  REQUIRE(cmd_simulate(cfg, true) == kExitOk);
  const auto dumped = read_data_matrix((tmp.path / "data_rep0.bin").string());
  REQUIRE(std::holds_alternative<Eigen::MatrixXcd>(dumped));
  CHECK(std::get<Eigen::MatrixXcd>(dumped).rows() == 12);
  CHECK(cmd_test(cfg) == kExitOk);
}

TEST_CASE("block-family configs solve through the pipeline") {
  TempDir tmp("acspec_pipe_block");
  const ordered_json j = ordered_json::parse(R"({
    "model": {"family": "block",
              "atoms": [{"coords": [0.25], "weight": 0.4}, {"coords": [0.75], "weight": 0.6}],
              "coefficients": [[0.5], [-0.3]]},
    "sim": {"p": 20, "n": 256, "taus": [0], "seed": 4},
    "output": {}
  })");
  RunConfig cfg = make_cfg(j, tmp.path.string());
  REQUIRE(cmd_lsd(cfg, false) == kExitOk);
  REQUIRE(cmd_kernel(cfg) == kExitOk);
  CHECK(fs::exists(tmp.path / "kernel_tau0.csv"));
  CHECK(fs::exists(tmp.path / "solution_tau0.csv"));
  CHECK(fs::exists(tmp.path / "density_tau0.csv"));
}

TEST_CASE("solver starvation surfaces as the non-convergence exit code") {
  TempDir tmp("acspec_pipe_starve");
  ordered_json j = identity_cfg(4, 16);
  j["solver"]["max_iter"] = 1;
  j["solver"]["tol"] = 1e-14;
  RunConfig cfg = make_cfg(j, tmp.path.string());
  CHECK(cmd_lsd(cfg, false) == kExitNoConvergence);
}

TEST_CASE("test command accepts dumped observation data") {
  TempDir tmp("acspec_pipe_data");
  ordered_json j = identity_cfg(16, 128);
  RunConfig base = make_cfg(j, tmp.path.string());
  REQUIRE(cmd_simulate(base, true) == kExitOk);

  ordered_json jt = identity_cfg(16, 128);
  jt["test"]["M"] = 19;
  jt["test"]["data_file"] = (tmp.path / "data_rep0.bin").string();
  RunConfig cfg = make_cfg(jt, (tmp.path / "wd").string());
  CHECK(cmd_test(cfg) == kExitOk);

  ordered_json bad = jt;
  bad["sim"]["p"] = 8;  // disagrees with the dump
  RunConfig cfg_bad = make_cfg(bad, (tmp.path / "wb").string());
  CHECK_THROWS_AS(cmd_test(cfg_bad), ConfigError);
}
