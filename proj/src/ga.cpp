#include "ddforge/ga.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace ddforge {

namespace {

enum StreamTag : std::uint64_t { kInit = 1, kSelect = 2, kBreed = 3, kEval = 4 };

PulseLabel random_label_for(Frame f, Rng& rng) { return labels_for_frame(f)[rng.below(2)]; }

PulseLabel random_label(Rng& rng) { return kDecouplingGroup[rng.below(kGroupSize)]; }

Frame frame_of_range(const std::vector<PulseLabel>& p, std::size_t lo, std::size_t hi) {
  Frame f = Frame::I;
  for (std::size_t i = lo; i < hi; ++i) f = f * p[i].frame();
  return f;
}

std::vector<int> ranked(const std::vector<double>& u) {
  std::vector<int> idx(u.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return u[a] > u[b]; });
  return idx;
}

int sample_index(const std::vector<double>& probs, Rng& rng) {
  double r = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

std::vector<double> selection_weights(const std::vector<double>& utilities) {
  std::vector<double> w(utilities.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::log(10.0 * utilities[i] + 1.0);
  return w;
}

std::vector<double> normalize_utilities(const std::vector<double>& utilities) {
  if (utilities.empty()) return {};
  auto [lo, hi] = std::minmax_element(utilities.begin(), utilities.end());
  std::vector<double> out(utilities.size(), 1.0);
  if (*hi > *lo)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (utilities[i] - *lo) / (*hi - *lo);
  return out;
}

std::vector<double> selection_utilities(const std::vector<double>& utilities) {
  bool bounded = std::all_of(utilities.begin(), utilities.end(), [](double u) { return u >= 0.0 && u <= 1.0; });
  return bounded ? utilities : normalize_utilities(utilities);
}

std::vector<double> selection_probabilities(const std::vector<double>& utilities) {
  auto w = selection_weights(selection_utilities(utilities));
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) return std::vector<double>(w.size(), w.empty() ? 0.0 : 1.0 / w.size());
  for (auto& x : w) x /= total;
  return w;
}

std::pair<DDSequence, DDSequence> crossover_at(const DDSequence& a, const DDSequence& b, int site, Rng& rng) {
  if (a.length() != b.length()) throw InvalidArgument("crossover needs equal lengths");
  if (site < 0 || site >= a.length()) throw InvalidArgument("crossover site out of range");
  const auto& pa = a.pulses();
  const auto& pb = b.pulses();
  const auto n = pa.size();
  const auto l = static_cast<std::size_t>(site);
  auto child = [&](const std::vector<PulseLabel>& head, const std::vector<PulseLabel>& tail) {
    std::vector<PulseLabel> c(head.begin(), head.begin() + l);
    c.push_back(random_label_for(completion_frame(frame_of_range(head, 0, l), frame_of_range(tail, l + 1, n)), rng));
    c.insert(c.end(), tail.begin() + l + 1, tail.end());
    return DDSequence(std::move(c));
  };
  auto c1 = child(pa, pb);
  auto c2 = child(pb, pa);
  return {std::move(c1), std::move(c2)};
}

std::pair<DDSequence, DDSequence> crossover(const DDSequence& a, const DDSequence& b, Rng& rng) {
  int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(a.length())));
  return crossover_at(a, b, site, rng);
}

DDSequence mutate_at(const DDSequence& seq, int site, PulseLabel label, int repair_site, Rng& rng) {
  if (site == repair_site) throw InvalidArgument("mutation sites must differ");
  auto p = seq.pulses();
  p.at(site) = label;
  p.at(repair_site) = labels::Ip;
  Frame rest = frame_of_range(p, 0, p.size());
  p[repair_site] = random_label_for(rest, rng);
  return DDSequence(std::move(p));
}

DDSequence mutate(const DDSequence& seq, double prob, Rng& rng) {
  if (!rng.bernoulli(prob)) return seq;
  auto L = static_cast<std::uint64_t>(seq.length());
  int l = static_cast<int>(rng.below(L));
  int l2 = static_cast<int>(rng.below(L - 1));
  if (l2 >= l) ++l2;
  return mutate_at(seq, l, random_label(rng), l2, rng);
}

std::pair<DDStrategy, DDStrategy> strategy_crossover(const DDStrategy& a, const DDStrategy& b, Rng& rng) {
  if (a.num_colors() != b.num_colors()) throw InvalidArgument("crossover needs equal color counts");
  DDStrategy x = a, y = b;
  for (int c = 0; c < a.num_colors(); ++c) {
    auto [s1, s2] = crossover(a.sequences[c], b.sequences[c], rng);
    if (rng.bernoulli(0.5)) std::swap(s1, s2);
    x.sequences[c] = std::move(s1);
    y.sequences[c] = std::move(s2);
  }
  return {std::move(x), std::move(y)};
}

DDStrategy mutate_strategy(const DDStrategy& s, double prob, Rng& rng) {
  DDStrategy out = s;
  for (auto& seq : out.sequences) seq = mutate(seq, prob, rng);
  return out;
}

SurvivorSelection next_generation(const Population& parents, const std::vector<DDStrategy>& offspring,
                                  const std::vector<double>& offspring_utilities) {
  const int K = parents.size();
  if (K % 4 != 0) throw InvalidPopulationSize("population size must be divisible by 4");
  if (static_cast<int>(parents.utilities.size()) != K || offspring.size() != offspring_utilities.size())
    throw InvalidArgument("missing utilities");
  if (static_cast<int>(offspring.size()) < 3 * K / 4) throw InvalidArgument("too few offspring");
  SurvivorSelection sel;
  auto pr = ranked(parents.utilities);
  auto orank = ranked(offspring_utilities);
  sel.parents.assign(pr.begin(), pr.begin() + K / 4);
  sel.offspring.assign(orank.begin(), orank.begin() + 3 * K / 4);
  sel.population.generation = parents.generation + 1;
  for (int i : sel.parents) {
    sel.population.strategies.push_back(parents.strategies[i]);
    sel.population.utilities.push_back(parents.utilities[i]);
  }
  for (int i : sel.offspring) {
    sel.population.strategies.push_back(offspring[i]);
    sel.population.utilities.push_back(offspring_utilities[i]);
  }
  return sel;
}

void GAConfig::validate() const {
  if (K <= 0 || K % 4 != 0) throw ConfigError("K must be a positive multiple of 4");
  if (L < 2) throw ConfigError("L must be at least 2");
  if (iterations < 0) throw ConfigError("iterations must be non-negative");
  if (shots <= 0) throw ConfigError("shots must be positive");
  if (!(mutation_low > 0.0 && mutation_low <= mutation_prob_init && mutation_prob_init <= mutation_high &&
        mutation_high < 1.0))
    throw ConfigError("mutation bounds must satisfy 0 < low <= init <= high < 1");
  if (mutation_step < 0.0) throw ConfigError("mutation step must be non-negative");
  if (!(proxy.far_threshold > proxy.close_threshold && proxy.close_threshold >= 0.0))
    throw ConfigError("thresholds must satisfy far > close >= 0");
}

double utility_statistic(const std::vector<double>& u, ProxyStatistic statistic) {
  if (u.empty()) return 0.0;
  if (statistic == ProxyStatistic::Range) {
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
  }
  double mean = std::accumulate(u.begin(), u.end(), 0.0) / u.size();
  double ss = 0.0;
  for (double x : u) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / u.size());
}

double update_mutation_prob(double current, double statistic, const GAConfig& config) {
  double step = config.direction == MutationDirection::Paper ? config.mutation_step : -config.mutation_step;
  double next = current;
  if (statistic > config.proxy.far_threshold)
    next = current + step;
  else if (statistic < config.proxy.close_threshold)
    next = current - step;
  return std::clamp(next, config.mutation_low, config.mutation_high);
}

nlohmann::json to_json(const IterationRecord& r) {
  return {{"iteration", r.iteration},
          {"utilities", r.utilities},
          {"survivor_utilities", r.survivor_utilities},
          {"parent_survivors", r.parent_survivors},
          {"offspring_survivors", r.offspring_survivors},
          {"best_utility", r.best_utility},
          {"mutation_prob", r.mutation_prob}};
}

IterationRecord iteration_record_from_json(const nlohmann::json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.utilities = j.at("utilities").get<std::vector<double>>();
  r.survivor_utilities = j.at("survivor_utilities").get<std::vector<double>>();
  r.parent_survivors = j.at("parent_survivors").get<std::vector<int>>();
  r.offspring_survivors = j.at("offspring_survivors").get<std::vector<int>>();
  r.best_utility = j.at("best_utility").get<double>();
  r.mutation_prob = j.at("mutation_prob").get<double>();
  return r;
}

nlohmann::json to_json(const Checkpoint& c) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : c.population.strategies) strategies.push_back(to_json(s));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : c.trace) trace.push_back(to_json(r));
  return {{"generation", c.generation},
          {"mutation_prob", c.mutation_prob},
          {"strategies", strategies},
          {"utilities", c.population.utilities},
          {"master_seed", c.master_seed},
          {"trace", trace}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    Checkpoint c;
    c.generation = j.at("generation").get<int>();
    c.mutation_prob = j.at("mutation_prob").get<double>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& s : j.at("strategies")) c.population.strategies.push_back(strategy_from_json(s));
    c.population.utilities = j.at("utilities").get<std::vector<double>>();
    c.population.generation = c.generation;
    if (j.contains("trace"))
      for (const auto& r : j.at("trace")) c.trace.push_back(iteration_record_from_json(r));
    if (c.population.utilities.size() != c.population.strategies.size())
      throw CheckpointCorrupt("utility count does not match strategy count");
    return c;
  } catch (const CheckpointCorrupt&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointCorrupt(e.what());
  }
}

namespace {

std::vector<double> evaluate_checked(const StrategyEvaluator& evaluate, const std::vector<DDStrategy>& batch,
                                     std::uint64_t seed) {
  for (const auto& s : batch) {
    s.validate();
    for (const auto& seq : s.sequences)
      if (frame_product(seq.pulses()) != Frame::I) throw InvalidSequence("frame product is not the identity");
  }
  auto u = evaluate(batch, seed);
  if (u.size() != batch.size()) throw BackendError("evaluator returned the wrong number of utilities");
  return u;
}

int argmax(const std::vector<double>& u) {
  return static_cast<int>(std::max_element(u.begin(), u.end()) - u.begin());
}

}  // namespace

TrainingResult run_gadd(const StrategyEvaluator& evaluate, int colors, const GAConfig& config,
                        const RunHooks& hooks) {
  config.validate();
  const int K = config.K;
  const std::uint64_t seed = config.seed;

  Checkpoint state;
  state.master_seed = seed;
  if (hooks.resume) {
    state = *hooks.resume;
    if (state.master_seed != seed) throw CheckpointCorrupt("checkpoint seed does not match config seed");
    if (state.population.size() != K) throw CheckpointCorrupt("checkpoint population size does not match K");
  } else {
    state.population = uniform_initial_population(K, config.L, derive_seed(seed, {kInit}), colors);
    state.population.utilities =
        evaluate_checked(evaluate, state.population.strategies, derive_seed(seed, {kEval, 0}));
    state.mutation_prob = config.mutation_prob_init;
    IterationRecord r;
    r.iteration = 0;
    r.utilities = state.population.utilities;
    r.survivor_utilities = r.utilities;
    r.best_utility = *std::max_element(r.utilities.begin(), r.utilities.end());
    r.mutation_prob = state.mutation_prob;
    state.trace.push_back(r);
    if (hooks.on_iteration) hooks.on_iteration(r, state);
  }

  auto target_reached = [&] {
    return config.target_utility && state.trace.back().best_utility >= *config.target_utility;
  };

  for (int gen = state.generation + 1; gen <= config.iterations; ++gen) {
    if (target_reached()) break;
    const auto g = static_cast<std::uint64_t>(gen);
    auto probs = selection_probabilities(state.population.utilities);
    Rng select(derive_seed(seed, {kSelect, g}));
    std::vector<std::pair<int, int>> pairs(K);
    for (auto& [i, j] : pairs) {
      i = sample_index(probs, select);
      j = sample_index(probs, select);
    }
    std::vector<DDStrategy> offspring;
    offspring.reserve(2 * K);
    for (int k = 0; k < K; ++k) {
      Rng breed(derive_seed(seed, {kBreed, g, static_cast<std::uint64_t>(k)}));
      auto [x, y] = strategy_crossover(state.population.strategies[pairs[k].first],
                                       state.population.strategies[pairs[k].second], breed);
      offspring.push_back(mutate_strategy(x, state.mutation_prob, breed));
      offspring.push_back(mutate_strategy(y, state.mutation_prob, breed));
    }

    std::vector<DDStrategy> batch = state.population.strategies;
    batch.insert(batch.end(), offspring.begin(), offspring.end());
    auto u = evaluate_checked(evaluate, batch, derive_seed(seed, {kEval, g}));

    Population parents = state.population;
    parents.utilities.assign(u.begin(), u.begin() + K);
    std::vector<double> ou(u.begin() + K, u.end());
    auto sel = next_generation(parents, offspring, ou);

    IterationRecord r;
    r.iteration = gen;
    r.utilities = u;
    r.survivor_utilities = sel.population.utilities;
    r.parent_survivors = sel.parents;
    r.offspring_survivors = sel.offspring;
    r.best_utility = *std::max_element(r.survivor_utilities.begin(), r.survivor_utilities.end());
    r.mutation_prob = state.mutation_prob;

    state.population = std::move(sel.population);
    state.population.generation = gen;
    state.generation = gen;
    state.mutation_prob = update_mutation_prob(
        state.mutation_prob, utility_statistic(state.population.utilities, config.proxy.statistic), config);
    state.trace.push_back(r);
    if (hooks.on_iteration) hooks.on_iteration(r, state);
  }

  TrainingResult res;
  res.trace = state.trace;
  res.population = state.population;
  int b = argmax(state.population.utilities);
  res.best = state.population.strategies[b];
  res.best_utility = state.population.utilities[b];
  res.mutation_prob = state.mutation_prob;
  res.stopped_early = state.generation < config.iterations;
  return res;
}

namespace {

DDSequence random_sequence(int L, Rng& rng) {
  std::vector<PulseLabel> p(L);
  for (int i = 0; i + 1 < L; ++i) p[i] = random_label(rng);
  p[L - 1] = labels::Ip;
  p[L - 1] = random_label_for(frame_product(p), rng);
  return DDSequence(std::move(p));
}

std::vector<DDSequence> initial_sequences(ExplorationInit init, const ExplorationConfig& cfg, Rng& rng) {
  std::vector<DDSequence> out;
  if (init == ExplorationInit::Random) {
    for (int i = 0; i < cfg.initial_size; ++i) out.push_back(random_sequence(cfg.L, rng));
    return out;
  }
  if (cfg.L == kGroupSize && cfg.initial_size == 16) return reference_population();
  auto pop = uniform_initial_population(cfg.initial_size, cfg.L, rng());
  for (auto& s : pop.strategies) out.push_back(s.sequences.front());
  return out;
}

}  // namespace

std::vector<ExplorationRow> simulate_exploration(const ExplorationConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (cfg.L < 2 || cfg.L > 21) throw InvalidArgument("exploration supports 2 <= L <= 21");
  std::vector<ExplorationRow> rows;
  for (auto init : {ExplorationInit::Uniform, ExplorationInit::Random}) {
    for (std::size_t pi = 0; pi < cfg.mutation_probs.size(); ++pi) {
      const double prob = cfg.mutation_probs[pi];
      ExplorationRow row{init, prob, std::vector<double>(cfg.iterations + 1, 0.0)};
      for (int t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(init), pi, static_cast<std::uint64_t>(t)}));
        std::unordered_map<std::uint64_t, double> utility;
        auto utility_of = [&](const DDSequence& s) {
          auto [it, fresh] = utility.try_emplace(s.code(), 0.0);
          if (fresh) it->second = rng.uniform();
          return it->second;
        };
        auto pop = initial_sequences(init, cfg, rng);
        std::unordered_set<std::uint64_t> seen;
        for (const auto& s : pop) {
          seen.insert(s.code());
          utility_of(s);
        }
        row.mean_unique[0] += seen.size();
        for (int it = 1; it <= cfg.iterations; ++it) {
          std::vector<DDSequence> children;
          for (std::size_t i = 0; i < pop.size(); ++i)
            for (std::size_t j = i + 1; j < pop.size(); ++j) {
              auto [a, b] = crossover(pop[i], pop[j], rng);
              for (auto* c : {&a, &b}) {
                DDSequence m = mutate(*c, prob, rng);
                seen.insert(m.code());
                children.push_back(std::move(m));
              }
            }
          row.mean_unique[it] += seen.size();
          // Next population: weighted sample without replacement over all children,
          // duplicates included, by log(10u + 1).
          std::vector<std::pair<double, std::size_t>> keys;
          keys.reserve(children.size());
          for (std::size_t i = 0; i < children.size(); ++i) {
            double w = std::log(10.0 * utility_of(children[i]) + 1.0);
            double v = rng.uniform();
            keys.emplace_back(w > 0 ? std::log(v) / w : -INFINITY, i);
          }
          std::size_t keep = std::min<std::size_t>(cfg.population_cap, children.size());
          std::partial_sort(keys.begin(), keys.begin() + keep, keys.end(),
                            [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
          std::vector<DDSequence> next;
          for (std::size_t i = 0; i < keep; ++i) next.push_back(children[keys[i].second]);
          if (next.size() >= 2) pop = std::move(next);
        }
      }
      for (auto& m : row.mean_unique) m /= cfg.trials;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace ddforge
