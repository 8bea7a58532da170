#include "ddforge/config.hpp"
#include "ddforge/errors.hpp"
#include "ddforge/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"ddforge: genetic search for dynamical decoupling strategies"};
  app.require_subcommand(1);

  std::string config_path, out_dir, resume;
  std::uint64_t seed = 0;
  bool quiet = false;

  const char* commands[][2] = {
      {"train", "run the genetic search and compare its best strategy with the baselines"},
      {"compare-baselines", "evaluate the canonical sequences (and a saved strategy) on the workload"},
      {"mrb-scan", "error-per-layer scan over mirror randomized benchmarking widths"},
      {"explore", "unique-sequence exploration table for the GA operators"},
      {"replay", "re-evaluate a saved population under a perturbed noise model"},
      {"workload", "write the workload circuits as JSON"},
  };
  for (auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment file (TOML)")->required();
    sub->add_option("--seed", seed, "master seed (overrides the file)");
    sub->add_option("--out", out_dir, "output directory (overrides the file)");
    sub->add_flag("-q,--quiet", quiet, "do not print the report");
    if (std::string(name) == "train") sub->add_option("--resume", resume, "checkpoint to continue from");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  try {
    auto config = ddforge::load_config(config_path);
    if (sub->count("--seed")) config.set_seed(seed);
    if (sub->count("--out")) config.out_dir = out_dir;
    if (!resume.empty()) config.resume = resume;
    if (!config.has_seed) throw ddforge::ConfigError("no seed given (set 'seed' in the file or pass --seed)");
    auto out = ddforge::run_command(command, config);
    if (!quiet) {
      if (!out.csv.empty())
        std::cout << out.csv;
      else
        std::cout << "wrote " << config.out_dir << "\n";
    }
    return 0;
  } catch (const ddforge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ddforge::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
