#pragma once

#include "ddforge/rng.hpp"
#include "ddforge/strategy.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ddforge {

// log(10u + 1) per utility.
std::vector<double> selection_weights(const std::vector<double>& utilities);
// Normalized selection weights; all-zero weights become uniform.
std::vector<double> selection_probabilities(const std::vector<double>& utilities);
// Min-max rescale to [0, 1]; a constant vector maps to all ones.
std::vector<double> normalize_utilities(const std::vector<double>& utilities);
// Returns utilities unchanged when already in [0, 1], otherwise min-max.
std::vector<double> selection_utilities(const std::vector<double>& utilities);

// Sites are 0-based here. Crossover at site l keeps a[0..l), writes the
// completion pulse at l and takes b(l..L).
std::pair<DDSequence, DDSequence> crossover_at(const DDSequence& a, const DDSequence& b, int site, Rng& rng);
std::pair<DDSequence, DDSequence> crossover(const DDSequence& a, const DDSequence& b, Rng& rng);

// Set site l to `label` and repair site l2 so the frame product stays I.
DDSequence mutate_at(const DDSequence& seq, int site, PulseLabel label, int repair_site, Rng& rng);
DDSequence mutate(const DDSequence& seq, double prob, Rng& rng);

std::pair<DDStrategy, DDStrategy> strategy_crossover(const DDStrategy& a, const DDStrategy& b, Rng& rng);
// Each color mutates independently with probability prob.
DDStrategy mutate_strategy(const DDStrategy& s, double prob, Rng& rng);

struct SurvivorSelection {
  Population population;
  std::vector<int> parents;    // indices into the parent list
  std::vector<int> offspring;  // indices into the offspring list
};

// Top K/4 parents and top 3K/4 offspring by utility; ties go to the lower index.
SurvivorSelection next_generation(const Population& parents, const std::vector<DDStrategy>& offspring,
                                  const std::vector<double>& offspring_utilities);

enum class ProxyStatistic { Range, Stddev };
enum class MutationDirection { Paper, Inverted };

struct EquilibriumProxy {
  ProxyStatistic statistic = ProxyStatistic::Range;
  double far_threshold = 0.15;
  double close_threshold = 0.03;
};

struct GAConfig {
  int K = 16;
  int L = 8;
  int iterations = 20;
  int shots = 2000;
  double mutation_prob_init = 0.7;
  double mutation_step = 0.1;
  double mutation_low = 0.1;
  double mutation_high = 0.9;
  EquilibriumProxy proxy;
  MutationDirection direction = MutationDirection::Paper;
  std::optional<double> target_utility;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

double utility_statistic(const std::vector<double>& utilities, ProxyStatistic statistic);
double update_mutation_prob(double current, double statistic, const GAConfig& config);

struct IterationRecord {
  int iteration = 0;
  std::vector<double> utilities;  // parents first, then offspring
  std::vector<double> survivor_utilities;
  std::vector<int> parent_survivors;
  std::vector<int> offspring_survivors;
  double best_utility = 0.0;
  double mutation_prob = 0.0;  // probability used to mutate this iteration's offspring
};

nlohmann::json to_json(const IterationRecord& r);
IterationRecord iteration_record_from_json(const nlohmann::json& j);

struct TrainingResult {
  std::vector<IterationRecord> trace;
  Population population;
  DDStrategy best;
  double best_utility = 0.0;
  double mutation_prob = 0.0;
  bool stopped_early = false;
};

// State after a completed iteration; enough to resume bit-exactly.
struct Checkpoint {
  int generation = 0;
  double mutation_prob = 0.0;
  Population population;
  std::uint64_t master_seed = 0;
  std::vector<IterationRecord> trace;
};

nlohmann::json to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const nlohmann::json& j);  // throws CheckpointCorrupt

// Utilities for a batch of strategies. `seed` identifies the batch; the same
// (strategies, seed) must produce the same utilities.
using StrategyEvaluator = std::function<std::vector<double>(const std::vector<DDStrategy>&, std::uint64_t seed)>;

struct RunHooks {
  std::function<void(const IterationRecord&, const Checkpoint&)> on_iteration;
  const Checkpoint* resume = nullptr;
};

TrainingResult run_gadd(const StrategyEvaluator& evaluate, int colors, const GAConfig& config,
                        const RunHooks& hooks = {});

enum class ExplorationInit { Uniform, Random };

struct ExplorationConfig {
  int trials = 25;
  int L = 8;
  int iterations = 7;
  int initial_size = 16;
  int population_cap = 100;
  std::vector<double> mutation_probs = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::uint64_t seed = 0;
};

struct ExplorationRow {
  ExplorationInit init;
  double mutation_prob;
  std::vector<double> mean_unique;  // cumulative distinct sequences after iteration i (0 = initial)
};

std::vector<ExplorationRow> simulate_exploration(const ExplorationConfig& config);

}  // namespace ddforge
