#include <CLI11.hpp>

#include "acspec/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acspec: spectra of renormalized sample autocovariance matrices"};
  app.require_subcommand(1);

  acspec::CliOptions cli;
  std::uint64_t seed_flag = 0;

  const std::vector<std::string> commands = {"simulate", "kernel", "lsd", "density",
                                             "esd",      "compare", "test"};
  const std::vector<std::string> blurbs = {
      "simulate data, dump the observation matrix and export eigenvalue spectra",
      "export the atom-level kernel matrix R_tau",
      "solve the limiting-spectral-distribution equations and invert the density",
      "invert the LSD density only",
      "simulate data and export eigenvalue spectra",
      "KS distances between simulated spectra and the solver LSD",
      "goodness-of-fit test with a Monte Carlo Gaussian null"};

  for (std::size_t k = 0; k < commands.size(); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k], blurbs[k]);
    sub->add_option("--config", cli.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed_flag, "seed (overrides config)")
        ->each([&cli, &seed_flag](const std::string&) { cli.seed = seed_flag; });
    sub->add_option("--threads", cli.threads, "worker threads (default: hardware)");
    sub->add_flag("--dry-run", cli.dry_run, "print the resolved config and exit");
  }

  CLI11_PARSE(app, argc, argv);
  return acspec::run_command(app.get_subcommands().front()->get_name(), cli);
}
