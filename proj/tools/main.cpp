// biphoton: run one simulation or analysis command from a config file.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "biphoton/commands.hpp"
#include "biphoton/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-photon amplitude simulation and scan analysis for thin nonlinear layers"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> grid_n;
  std::optional<std::string> data;
  bool quiet = false;

  app.add_option("--config", config_path, "Config file")->required();
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory (default: config output_dir, or $BIPHOTON_OUT_DIR)");
  app.add_option("--grid-n", grid_n, "Points per angular axis (odd)");
  app.add_flag("--quiet", quiet, "Suppress the artifact summary on stdout");
  app.fallthrough();

  for (const auto& name : biphoton::command_names()) {
    auto* sub = app.add_subcommand(name);
    if (name == "fit-knife" || name == "fit-slit") {
      sub->add_option("--data", data, "Scan CSV to fit instead of simulating one");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : biphoton::exit_usage;
  }

  biphoton::RunConfig config;
  try {
    config = biphoton::load_config(config_path);
    if (seed) config.counting.rng_seed = *seed;
    if (grid_n) {
      if (*grid_n < 3 || *grid_n % 2 == 0) throw biphoton::ArgumentError("--grid-n must be odd and >= 3");
      config.grid.n = *grid_n;
    }
    if (out_dir) {
      config.output_dir = *out_dir;
    } else if (const char* env = std::getenv("BIPHOTON_OUT_DIR"); env && *env) {
      config.output_dir = env;
    }
  } catch (const std::exception& e) {
    std::cerr << biphoton::error_report(e) << "\n";
    return biphoton::exit_code_for(e);
  }

  biphoton::CommandOptions options;
  if (data) options.data = *data;
  options.quiet = quiet;
  return biphoton::run_command(app.get_subcommands().front()->get_name(), config, options, std::cout, std::cerr);
}
