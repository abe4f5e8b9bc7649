#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlselab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nlse-lab: batch experiments for a family of nonlinear "
               "Schrodinger equations"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config and NLSE_LAB_OUT)");
  run->add_option("--seed", seed, "Seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_flag("--quiet", quiet, "Suppress the status line");

  CLI::App* list = app.add_subcommand("list", "List available experiments");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& [name, description] : nlselab::experiment_catalog()) {
      std::cout << name << "  -  " << description << "\n";
    }
    return 0;
  }
  if (run->parsed()) {
    nlselab::RunOptions options;
    if (!out_dir.empty()) options.output_dir = out_dir;
    if (seed_set) options.seed = seed;
    options.quiet = quiet;
    return nlselab::run_experiment(config_path, options);
  }

  std::cout << app.help();
  std::cout << "\nExperiments:\n";
  for (const auto& [name, description] : nlselab::experiment_catalog()) {
    std::cout << "  " << name << "  -  " << description << "\n";
  }
  return 0;
}
