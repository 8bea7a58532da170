#include "doctest.h"

#include "ddforge/errors.hpp"
#include "ddforge/ga.hpp"

#include <algorithm>
#include <cmath>

using namespace ddforge;

namespace {

bool identity(const DDSequence& s) { return frame_product(s.pulses()) == Frame::I; }

DDSequence random_identity_sequence(int L, Rng& rng) {
  std::vector<PulseLabel> p(L);
  Frame f = Frame::I;
  for (int i = 0; i + 1 < L; ++i) {
    p[i] = kDecouplingGroup[rng.below(8)];
    f = f * p[i].frame();
  }
  p[L - 1] = PulseLabel(f, rng.bernoulli(0.5) ? Sign::Plus : Sign::Minus);
  return DDSequence(p);
}

// Fraction of sites (over all colors) equal to a hidden target.
StrategyEvaluator landscape(const DDSequence& target) {
  return [target](const std::vector<DDStrategy>& batch, std::uint64_t) {
    std::vector<double> u;
    for (const auto& s : batch) {
      int hit = 0, total = 0;
      for (const auto& seq : s.sequences)
        for (int i = 0; i < seq.length(); ++i, ++total) hit += seq[i] == target[i];
      u.push_back(double(hit) / total);
    }
    return u;
  };
}

}  // namespace

TEST_SUITE("ga") {
  TEST_CASE("selection weights") {
    auto w = selection_weights({0.0, 1.0});
    CHECK(w[0] == 0.0);
    CHECK(w[1] == doctest::Approx(2.397895273).epsilon(1e-9));
    auto p = selection_probabilities({0.5, 0.5});
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    auto z = selection_probabilities({0.0, 0.0, 0.0, 0.0});
    for (double x : z) CHECK(x == doctest::Approx(0.25));
    auto n = selection_probabilities({-2.0, 0.0, 2.0});
    CHECK(n[0] == 0.0);
    CHECK(n[2] > n[1]);
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> u(10);
      for (auto& x : u) x = rng.uniform();
      auto q = selection_probabilities(u);
      int best = int(std::max_element(u.begin(), u.end()) - u.begin());
      for (int i = 0; i < 10; ++i)
        if (i != best) CHECK(q[best] > q[i]);
    }
  }

  TEST_CASE("crossover") {
    Rng rng(2);
    auto a = DDSequence::parse("XpYpXpYp");
    auto b = DDSequence::parse("XpXmYpYm");
    for (int t = 0; t < 20; ++t) {
      auto [c1, c2] = crossover_at(a, b, 1, rng);
      CHECK(c1[0] == labels::Xp);
      CHECK(c1[1].frame() == Frame::X);
      CHECK(c1[2] == labels::Yp);
      CHECK(c1[3] == labels::Ym);
      CHECK(identity(c2));
    }
    for (int t = 0; t < 50; ++t) {
      auto [x, y] = crossover(a, a, rng);
      for (auto* c : {&x, &y}) {
        int diff = 0;
        for (int i = 0; i < 4; ++i)
          if ((*c)[i] != a[i]) {
            ++diff;
            CHECK((*c)[i].frame() == a[i].frame());
          }
        CHECK(diff <= 1);
      }
    }
    for (int t = 0; t < 10000; ++t) {
      int L = 2 + int(rng.below(10));
      auto [x, y] = crossover(random_identity_sequence(L, rng), random_identity_sequence(L, rng), rng);
      REQUIRE(identity(x));
      REQUIRE(identity(y));
    }
  }

  TEST_CASE("mutation") {
    Rng rng(3);
    auto xy4 = DDSequence::parse("XpYpXpYp");
    for (int t = 0; t < 100; ++t) CHECK(mutate(xy4, 0.0, rng) == xy4);
    auto m = mutate_at(xy4, 0, labels::Zp, 2, rng);
    CHECK(m[0] == labels::Zp);
    CHECK(m[2].frame() == Frame::Z);
    CHECK(m[1] == labels::Yp);
    CHECK(m[3] == labels::Yp);
    CHECK_THROWS_AS(mutate_at(xy4, 1, labels::Zp, 1, rng), InvalidArgument);
    int changed = 0;
    for (int t = 0; t < 10000; ++t) {
      auto s = random_identity_sequence(2 + int(rng.below(10)), rng);
      auto r = mutate(s, 1.0, rng);
      REQUIRE(identity(r));
      changed += !(r == s);
    }
    CHECK(changed > 8000);
  }

  TEST_CASE("strategy crossover") {
    Rng rng(4);
    for (int t = 0; t < 500; ++t) {
      DDStrategy a, b;
      for (int c = 0; c < 2; ++c) {
        a.sequences.push_back(random_identity_sequence(8, rng));
        b.sequences.push_back(random_identity_sequence(8, rng));
        a.timing.push_back(default_timing_mode(c));
        b.timing.push_back(default_timing_mode(c));
      }
      auto [x, y] = strategy_crossover(a, b, rng);
      CHECK(x.timing == a.timing);
      for (int c = 0; c < 2; ++c) {
        CHECK(identity(x.sequences[c]));
        CHECK(identity(y.sequences[c]));
        // the two children of one color split across the offspring: first
        // sites come from different parents unless the parents agree there
        bool from_a = x.sequences[c][0] == a.sequences[c][0] && y.sequences[c][0] == b.sequences[c][0];
        bool from_b = x.sequences[c][0] == b.sequences[c][0] && y.sequences[c][0] == a.sequences[c][0];
        bool site0 = x.sequences[c][0].frame() == a.sequences[c][0].frame() ||
                     x.sequences[c][0].frame() == b.sequences[c][0].frame();
        CHECK((from_a || from_b || site0));
      }
    }
    auto s = DDStrategy::replicate(sequences::xy4(), 3);
    auto [p, q] = strategy_crossover(s, s, rng);
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 4; ++i) CHECK(p.sequences[c][i].frame() == s.sequences[c][i].frame());
  }

  TEST_CASE("survivor rule") {
    Population parents;
    for (int i = 0; i < 4; ++i) parents.strategies.push_back(DDStrategy::replicate(sequences::cpmg(), 1));
    parents.utilities = {0.9, 0.1, 0.2, 0.3};
    std::vector<DDStrategy> off(8, DDStrategy::replicate(sequences::xy4(), 1));
    auto sel = next_generation(parents, off, {0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1});
    CHECK(sel.parents == std::vector<int>{0});
    CHECK(sel.offspring == std::vector<int>{0, 1, 2});
    CHECK(sel.population.size() == 4);
    auto tie = next_generation(Population{parents.strategies, {0.5, 0.5, 0.5, 0.5}, 0}, off,
                               std::vector<double>(8, 0.5));
    CHECK(tie.parents == std::vector<int>{0});
    CHECK(tie.offspring == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("mutation probability schedule") {
    GAConfig cfg;
    cfg.proxy.far_threshold = 0.2;
    CHECK(update_mutation_prob(0.7, 0.5, cfg) == doctest::Approx(0.8));
    CHECK(update_mutation_prob(0.1, 0.0, cfg) == doctest::Approx(0.1));
    CHECK(update_mutation_prob(0.5, 0.1, cfg) == doctest::Approx(0.5));
    CHECK(update_mutation_prob(0.9, 0.5, cfg) == doctest::Approx(0.9));
    cfg.direction = MutationDirection::Inverted;
    CHECK(update_mutation_prob(0.7, 0.5, cfg) == doctest::Approx(0.6));
    CHECK(utility_statistic({0.1, 0.4, 0.3}, ProxyStatistic::Range) == doctest::Approx(0.3));
    CHECK(utility_statistic({1.0, 3.0}, ProxyStatistic::Stddev) == doctest::Approx(1.0));
    GAConfig bad;
    bad.K = 6;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = GAConfig{};
    bad.mutation_prob_init = 0.95;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("training loop invariants") {
    GAConfig cfg;
    cfg.iterations = 20;
    cfg.seed = 11;
    auto target = DDSequence::parse("XpYpZpImXmYmZmIp");
    int evaluations = 0;
    auto eval = [&](const std::vector<DDStrategy>& b, std::uint64_t s) {
      evaluations += int(b.size());
      return landscape(target)(b, s);
    };
    auto res = run_gadd(eval, 3, cfg);
    CHECK(evaluations == 16 + 20 * 48);
    REQUIRE(res.trace.size() == 21);
    for (const auto& r : res.trace) {
      if (r.iteration == 0) continue;
      CHECK(r.parent_survivors.size() == 4);
      CHECK(r.offspring_survivors.size() == 12);
      CHECK(r.utilities.size() == 48);
    }
    for (const auto& s : res.population.strategies)
      for (const auto& q : s.sequences) CHECK(identity(q));
    CHECK(res.population.size() == 16);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i].best_utility >= res.trace[i - 1].best_utility);

    auto again = run_gadd(landscape(target), 3, cfg);
    CHECK(again.best == res.best);
    CHECK(to_json(again.trace.back()) == to_json(res.trace.back()));
  }

  TEST_CASE("resume matches uninterrupted run") {
    GAConfig cfg;
    cfg.iterations = 8;
    cfg.seed = 5;
    // noisy evaluator that depends on the batch seed
    StrategyEvaluator noisy = [](const std::vector<DDStrategy>& b, std::uint64_t seed) {
      std::vector<double> u;
      for (std::size_t i = 0; i < b.size(); ++i) {
        Rng r(derive_seed(seed, {fnv1a(b[i].key())}));
        int zs = 0;
        for (auto p : b[i].sequences[0].pulses()) zs += p.axis() == Frame::Z;
        u.push_back(std::clamp(zs / 8.0 + 0.05 * r.normal(), 0.0, 1.0));
      }
      return u;
    };
    auto full = run_gadd(noisy, 2, cfg);
    Checkpoint at5;
    RunHooks hooks;
    hooks.on_iteration = [&](const IterationRecord& r, const Checkpoint& c) {
      if (r.iteration == 5) at5 = checkpoint_from_json(nlohmann::json::parse(to_json(c).dump()));
    };
    run_gadd(noisy, 2, cfg, hooks);
    RunHooks resume;
    resume.resume = &at5;
    auto resumed = run_gadd(noisy, 2, cfg, resume);
    CHECK(resumed.best == full.best);
    CHECK(resumed.population.utilities == full.population.utilities);
    REQUIRE(resumed.trace.size() == full.trace.size());
    for (std::size_t i = 0; i < full.trace.size(); ++i) CHECK(to_json(resumed.trace[i]) == to_json(full.trace[i]));
    CHECK_THROWS_AS(checkpoint_from_json(nlohmann::json{{"generation", 1}}), CheckpointCorrupt);
  }

  TEST_CASE("edge cases") {
    GAConfig cfg;
    cfg.iterations = 0;
    StrategyEvaluator one = [](const std::vector<DDStrategy>& b, std::uint64_t) {
      return std::vector<double>(b.size(), 1.0);
    };
    auto r = run_gadd(one, 1, cfg);
    CHECK(r.trace.size() == 1);
    CHECK(r.best_utility == 1.0);
    cfg.iterations = 5;
    cfg.target_utility = 0.99;
    auto s = run_gadd(one, 1, cfg);
    CHECK(s.trace.size() == 1);
    CHECK(s.stopped_early);
  }

  TEST_CASE("synthetic landscape median is non-decreasing") {
    auto target = DDSequence::parse("ZpXpImYmXmZmYpIp");
    std::vector<std::vector<double>> best(11);
    for (int run = 0; run < 20; ++run) {
      GAConfig cfg;
      cfg.iterations = 10;
      cfg.seed = 100 + run;
      auto res = run_gadd(landscape(target), 1, cfg);
      for (int i = 0; i <= 10; ++i) best[i].push_back(res.trace[i].best_utility);
    }
    double prev = -1;
    for (auto& v : best) {
      std::sort(v.begin(), v.end());
      double med = 0.5 * (v[9] + v[10]);
      CHECK(med >= prev);
      prev = med;
    }
    CHECK(prev > best[0][10]);
  }

  TEST_CASE("exploration") {
    ExplorationConfig cfg;
    cfg.trials = 1;
    cfg.iterations = 2;
    cfg.mutation_probs = {0.0, 0.5};
    cfg.seed = 9;
    auto a = simulate_exploration(cfg);
    auto b = simulate_exploration(cfg);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].mean_unique == b[i].mean_unique);
    CHECK(a[0].mean_unique[0] == 16);
    for (const auto& row : a)
      for (std::size_t i = 1; i < row.mean_unique.size(); ++i) CHECK(row.mean_unique[i] >= row.mean_unique[i - 1]);
  }
}
