#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/ga.hpp"
#include "ddforge/noise.hpp"
#include "ddforge/simulator.hpp"
#include "ddforge/workloads.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ddforge {

enum class WorkloadKind { BV, GHZ, Grover, MRB };

struct WorkloadConfig {
  WorkloadKind kind = WorkloadKind::BV;
  int n = 9;  // BV problem qubits, GHZ/Grover/MRB width
  std::string topology = "linear";
  // grover
  std::string oracle;  // empty: all ones
  int iterations = 0;  // 0: default for n
  bool cliffordize = false;
  bool evaluate_all_oracles = false;
  // mrb
  int layers = 4;
  int count = 5;
  MrbFlavor flavor = MrbFlavor::Clifford;
  double xi = 0.25;
};

struct NoiseConfig {
  std::string preset = "desk";  // desk | zero
  DeskDeviceParams params;
  double scale = 1.0;
  bool identity_as_2pi = false;

  NoiseModel build(const Topology& topology) const;
};

struct DDConfig {
  int max_colors = 3;
  int repetitions = 1;
};

struct BaselineConfig {
  std::vector<std::string> names;  // empty: every canonical strategy
  int repeats = 3;
};

struct MrbScanConfig {
  std::vector<int> widths = {2, 4, 6, 8};
  std::vector<int> depths = {2, 4, 8, 16};
  int circuits_per_depth = 5;
  bool train_motif = false;
  int motif_width = 6;
  int motif_layers = 4;
  int motif_count = 5;
};

struct ReplayConfig {
  std::string checkpoint;
  double perturb_low = 0.9;
  double perturb_high = 1.1;
  double noise_scale = 1.0;
  int repeats = 10;
};

struct ExperimentConfig {
  std::string command;  // optional default command
  std::uint64_t seed = 0;
  bool has_seed = false;
  WorkloadConfig workload;
  NoiseConfig noise;
  GateTimingModel timing;
  SimOptions sim;
  GAConfig ga;
  DDConfig dd;
  BaselineConfig baselines;
  MrbScanConfig mrb_scan;
  ExplorationConfig explore;
  ReplayConfig replay;
  std::string strategy_file;  // saved GADD strategy (report or checkpoint JSON)
  std::string resume;         // train: checkpoint to continue from
  std::string out_dir = "out";
  std::uint64_t config_hash = 0;

  void set_seed(std::uint64_t s);
};

// Throws ConfigError for malformed files, unknown keys or missing references.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

std::string_view workload_name(WorkloadKind kind);

}  // namespace ddforge
