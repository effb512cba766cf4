#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dimerlab/config.hpp"
#include "dimerlab/errors.hpp"
#include "dimerlab/io.hpp"
#include "dimerlab/scenarios.hpp"

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const dimerlab::config_error*>(&e)) return 2;
  if (dynamic_cast<const dimerlab::numeric_error*>(&e)) return 3;
  if (dynamic_cast<const dimerlab::io_error*>(&e)) return 4;
  if (dynamic_cast<const dimerlab::invariant_error*>(&e)) return 5;
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  // threaded BLAS reorders reductions; one thread keeps runs reproducible and
  // leaves the cores to the sweep jobs
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  setenv("OMP_NUM_THREADS", "1", 0);

  CLI::App app{"two-site dissipative Bose-Hubbard laboratory"};
  app.set_version_flag("--version", std::string(dimerlab::kToolVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a scenario from a config file");
  std::string scenario, config_path, outdir, log_level = "info";
  bool plots = false;
  run->add_option("scenario", scenario,
                  "one of: evolve spectrum reduced pde collapse fig1 fig2 "
                  "fig4 regimes")
      ->required();
  run->add_option("config", config_path, "path to config file")->required();
  run->add_option("--out", outdir, "output directory (default runs/<scenario>)");
  run->add_flag("--plots", plots, "also write SVG plots");
  run->add_option("--log-level", log_level, "error|warn|info|debug");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (log_level == "error")
      dimerlab::set_log_level(dimerlab::LogLevel::error);
    else if (log_level == "warn")
      dimerlab::set_log_level(dimerlab::LogLevel::warn);
    else if (log_level == "info")
      dimerlab::set_log_level(dimerlab::LogLevel::info);
    else if (log_level == "debug")
      dimerlab::set_log_level(dimerlab::LogLevel::debug);
    else
      throw dimerlab::config_error("unknown log level: " + log_level);

    if (!dimerlab::is_known_scenario(scenario))
      throw dimerlab::config_error("unknown scenario: " + scenario);
    const dimerlab::Config cfg = dimerlab::Config::parse_file(config_path);
    if (outdir.empty()) outdir = "runs/" + scenario;
    dimerlab::run_scenario(scenario, cfg, outdir, plots);
    return 0;
  } catch (const std::exception& e) {
    dimerlab::log_line(dimerlab::LogLevel::error, e.what());
    return exit_code_for(e);
  }
}
