#include "ddforge/strategy.hpp"

#include "ddforge/errors.hpp"
#include "ddforge/rng.hpp"

#include <algorithm>
#include <numeric>

namespace ddforge {

DDSequence::DDSequence(std::vector<PulseLabel> pulses) : pulses_(std::move(pulses)) {
  if (pulses_.size() < 2) throw InvalidSequence("sequence length must be at least 2");
  if (frame_product(pulses_) != Frame::I)
    throw InvalidSequence("sequence " + format_pulses(pulses_) + " does not multiply to identity");
}

DDSequence DDSequence::parse(std::string_view text) { return DDSequence(parse_pulses(text)); }

std::uint64_t DDSequence::code() const {
  std::uint64_t c = 0;
  for (auto p : pulses_) c = (c << 3) | static_cast<std::uint64_t>(p.index());
  return c;
}

std::string_view timing_name(TimingMode mode) {
  switch (mode) {
    case TimingMode::Symmetric: return "symmetric";
    case TimingMode::AsymEarly: return "asym_early";
    case TimingMode::AsymLate: return "asym_late";
  }
  return "?";
}

TimingMode parse_timing_mode(std::string_view name) {
  if (name == "symmetric") return TimingMode::Symmetric;
  if (name == "asym_early") return TimingMode::AsymEarly;
  if (name == "asym_late") return TimingMode::AsymLate;
  throw InvalidArgument("unknown timing mode '" + std::string(name) + "'");
}

TimingMode default_timing_mode(int color) { return static_cast<TimingMode>(color % 3); }

ColorAssignment color_graph(const std::vector<Edge>& edges, int num_qubits, int max_colors) {
  if (max_colors < 1) throw InvalidArgument("max_colors must be >= 1");
  std::vector<std::vector<int>> adj(num_qubits);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits || a == b)
      throw InvalidEdge("edge outside qubit range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  ColorAssignment out;
  out.color.assign(num_qubits, -1);
  for (int q = 0; q < num_qubits; ++q) {
    std::vector<bool> used(max_colors + 1, false);
    for (int v : adj[q])
      if (out.color[v] >= 0 && out.color[v] <= max_colors) used[out.color[v]] = true;
    int c = 0;
    while (used[c]) ++c;
    if (c >= max_colors)
      throw ColoringOverflow("greedy coloring needs more than " + std::to_string(max_colors) + " colors");
    out.color[q] = c;
    out.num_colors = std::max(out.num_colors, c + 1);
  }
  return out;
}

void DDStrategy::validate() const {
  if (sequences.empty()) throw InvalidSequence("strategy has no colors");
  if (timing.size() != sequences.size()) throw InvalidSequence("timing modes do not match colors");
  for (const auto& s : sequences)
    if (s.length() != sequences.front().length())
      throw InvalidSequence("strategy colors have different lengths");
}

DDStrategy DDStrategy::replicate(const DDSequence& seq, int colors, bool staggered) {
  DDStrategy s;
  for (int c = 0; c < colors; ++c) {
    s.sequences.push_back(seq);
    s.timing.push_back(staggered ? default_timing_mode(c) : TimingMode::Symmetric);
  }
  return s;
}

std::string DDStrategy::key() const {
  std::string k;
  for (std::size_t c = 0; c < sequences.size(); ++c) {
    if (c) k += '|';
    k += sequences[c].str();
    k += ':';
    k += timing_name(timing[c]);
  }
  return k;
}

nlohmann::json to_json(const DDStrategy& s) {
  nlohmann::json colors = nlohmann::json::array();
  for (std::size_t c = 0; c < s.sequences.size(); ++c)
    colors.push_back({{"pulses", s.sequences[c].str()}, {"timing", timing_name(s.timing[c])}});
  return {{"colors", colors}};
}

DDStrategy strategy_from_json(const nlohmann::json& j) {
  DDStrategy s;
  for (const auto& c : j.at("colors")) {
    s.sequences.push_back(DDSequence::parse(c.at("pulses").get<std::string>()));
    s.timing.push_back(parse_timing_mode(c.at("timing").get<std::string>()));
  }
  s.validate();
  return s;
}

namespace {

std::vector<PulseLabel> shifted(const std::vector<PulseLabel>& base, int k) {
  std::vector<PulseLabel> out(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) out[j] = base[(j + k) % base.size()];
  return out;
}

// Balanced columns with swap repair for general L.
std::vector<DDSequence> balanced_sequences(int K, int L, Rng& rng) {
  const int per = K / kGroupSize;
  for (;;) {
    std::vector<std::vector<PulseLabel>> seqs(K, std::vector<PulseLabel>(L));
    for (int j = 0; j < L; ++j) {
      std::vector<PulseLabel> column;
      for (auto g : kDecouplingGroup)
        for (int r = 0; r < per; ++r) column.push_back(g);
      rng.shuffle(column.begin(), column.end());
      for (int i = 0; i < K; ++i) seqs[i][j] = column[i];
    }
    std::vector<Frame> prod(K);
    for (int i = 0; i < K; ++i) prod[i] = frame_product(seqs[i]);
    auto violations = [&] {
      std::vector<int> v;
      for (int i = 0; i < K; ++i)
        if (prod[i] != Frame::I) v.push_back(i);
      return v;
    };
    for (int attempt = 0; attempt < 10 * K; ++attempt) {
      auto bad = violations();
      if (bad.empty()) {
        std::vector<DDSequence> out;
        for (auto& s : seqs) out.emplace_back(std::move(s));
        return out;
      }
      // Swapping site j between a and b multiplies both products by
      // d = f_aj * f_bj; choosing d = P_a fixes a, and fixes b too when
      // P_b = P_a. Prefer such pairs, otherwise any reducing swap.
      const int a = bad[rng.below(bad.size())];
      int best_b = -1, best_j = -1, best_gain = 0;
      for (int b : bad) {
        if (b == a) continue;
        for (int j = 0; j < L; ++j) {
          Frame d = seqs[a][j].frame() * seqs[b][j].frame();
          if (d == Frame::I) continue;
          int gain = (prod[a] * d == Frame::I) + (prod[b] * d == Frame::I);
          if (gain > best_gain || (gain == best_gain && gain > 0 && rng.bernoulli(0.5))) {
            best_gain = gain, best_b = b, best_j = j;
          }
        }
      }
      if (best_gain == 0) continue;
      Frame d = seqs[a][best_j].frame() * seqs[best_b][best_j].frame();
      std::swap(seqs[a][best_j], seqs[best_b][best_j]);
      prod[a] = prod[a] * d;
      prod[best_b] = prod[best_b] * d;
    }
  }
}

}  // namespace

std::vector<DDSequence> reference_population() {
  const auto a = parse_pulses("IpImXpXmYpYmZpZm");
  const auto b = parse_pulses("IpXpYpZpImXmYmZm");
  std::vector<DDSequence> out;
  for (int k = 0; k < 8; ++k) {
    out.emplace_back(shifted(a, k));
    out.emplace_back(shifted(b, k));
  }
  return out;
}

Population uniform_initial_population(int K, int L, std::uint64_t seed, int colors) {
  if (K <= 0 || K % kGroupSize != 0)
    throw InvalidPopulationSize("population size " + std::to_string(K) + " is not a positive multiple of 8");
  if (L < 2) throw InvalidArgument("sequence length must be at least 2");
  if (colors < 1) throw InvalidArgument("need at least one color");
  Rng rng(derive_seed(seed, {0x1417}));
  std::vector<DDSequence> seqs;
  if (L == kGroupSize) {
    for (int f = 0; f < K / kGroupSize; ++f) {
      std::vector<PulseLabel> base(kDecouplingGroup.begin(), kDecouplingGroup.end());
      rng.shuffle(base.begin(), base.end());
      for (int k = 0; k < kGroupSize; ++k) seqs.emplace_back(shifted(base, k));
    }
  } else {
    seqs = balanced_sequences(K, L, rng);
  }
  Population pop;
  for (auto& s : seqs) pop.strategies.push_back(DDStrategy::replicate(s, colors));
  return pop;
}

namespace sequences {
DDSequence cpmg() { return DDSequence::parse("XpXp"); }
DDSequence cpmg_pm() { return DDSequence::parse("XpXm"); }
DDSequence xy4() { return DDSequence::parse("XpYpXpYp"); }
DDSequence edd() { return DDSequence::parse("XpYpXpYpYpXpYpXp"); }
}  // namespace sequences

std::vector<NamedStrategy> canonical_strategies(int colors) {
  const std::pair<const char*, DDSequence> families[] = {
      {"CPMG", sequences::cpmg()},
      {"CPMG_pm", sequences::cpmg_pm()},
      {"XY4", sequences::xy4()},
      {"EDD", sequences::edd()},
  };
  std::vector<NamedStrategy> out;
  for (const auto& [name, seq] : families) {
    out.push_back({std::string(name) + "_aligned", DDStrategy::replicate(seq, colors, false)});
    out.push_back({std::string(name) + "_staggered", DDStrategy::replicate(seq, colors, true)});
  }
  out.push_back({"UR16", std::nullopt});
  return out;
}

BigInt strategy_space_size(int group_size, int L, int C) {
  if (group_size < 1 || L < 2 || C < 1) throw InvalidArgument("strategy_space_size arguments out of range");
  return boost::multiprecision::pow(BigInt(group_size), static_cast<unsigned>((L - 1) * C));
}

BigInt equivalence_class_count(int group_size, int L) {
  if (group_size < 1 || L < 2) throw InvalidArgument("equivalence_class_count arguments out of range");
  // C(n, k) with n = g + L - 2, k = g - 1
  const int n = group_size + L - 2, k = group_size - 1;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace ddforge
