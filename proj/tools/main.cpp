// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cochain-projection finite elements for Lagrangian field theories"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"solve", "simulate", "verify", "converge"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed for random probes (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : structfem::cli::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  structfem::cli::Config config;
  try {
    config = structfem::cli::load_config(config_path);
  } catch (const structfem::cli::ConfigError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return structfem::cli::kConfigError;
  }
  if (seed) config.seed = *seed;
  return structfem::cli::run_command(command, config, out_dir, std::cout);
}
