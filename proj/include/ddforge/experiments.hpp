#pragma once

#include "ddforge/backend.hpp"
#include "ddforge/config.hpp"
#include "ddforge/ga.hpp"
#include "ddforge/metrics.hpp"
#include "ddforge/strategy.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ddforge {

struct EvalCircuit {
  ScheduledCircuit circuit;
  UtilityKind kind = UtilityKind::SuccessProbability;
  std::string target;
  ProbabilityMap ideal;  // OneNorm only
  std::string label;
};

struct Workload {
  Topology topology;
  std::vector<EvalCircuit> training;
  std::vector<EvalCircuit> evaluation;
};

Workload build_workload(const WorkloadConfig& config, const GateTimingModel& timing, std::uint64_t seed);

double circuit_utility(const EvalCircuit& c, const CountsDistribution& counts);

// Scores strategies (nullopt = no DD) by their mean utility over a circuit set.
class StrategyScorer {
 public:
  StrategyScorer(ExecutionBackend& backend, ColorAssignment coloring, GateTimingModel timing, DDConfig dd, int shots);

  std::vector<double> score(const std::vector<std::optional<DDStrategy>>& strategies,
                            const std::vector<EvalCircuit>& set, std::uint64_t seed) const;
  const ColorAssignment& coloring() const { return coloring_; }

 private:
  ExecutionBackend& backend_;
  ColorAssignment coloring_;
  GateTimingModel timing_;
  DDConfig dd_;
  int shots_;
};

ColorAssignment workload_coloring(const Topology& topology, const DDConfig& dd);

struct ScoreSummary {
  std::string name;
  bool supported = true;
  std::vector<double> values;
  double mean = 0.0;
  double stderr = 0.0;
  double max = 0.0;

  nlohmann::json to_json() const;
};

ScoreSummary summarize(std::string name, std::vector<double> values);

struct BaselineEntry {
  std::string name;
  std::optional<DDStrategy> strategy;  // nullopt: no DD
  bool supported = true;
};

// "no-DD" plus the canonical families, filtered by config.names when non-empty.
std::vector<BaselineEntry> baseline_entries(const BaselineConfig& config, int colors);

// Saved strategy from a report.json (gadd.strategy) or a checkpoint (best by utility).
DDStrategy load_strategy_file(const std::string& path);

nlohmann::json report_header(const ExperimentConfig& config, const std::string& command);

struct CommandOutput {
  nlohmann::json report;
  std::string csv;
};

// Each command writes its artifacts under config.out_dir and returns the report.
CommandOutput cmd_train(const ExperimentConfig& config);
CommandOutput cmd_compare_baselines(const ExperimentConfig& config);
CommandOutput cmd_mrb_scan(const ExperimentConfig& config);
CommandOutput cmd_explore(const ExperimentConfig& config);
CommandOutput cmd_replay(const ExperimentConfig& config);
CommandOutput cmd_workload(const ExperimentConfig& config);

CommandOutput run_command(const std::string& command, const ExperimentConfig& config);

}  // namespace ddforge
