#pragma once

#include "ddforge/graph.hpp"
#include "ddforge/pauli.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ddforge {

// Pulse sequence of length >= 2 whose frame product is the identity.
class DDSequence {
 public:
  DDSequence() = default;
  explicit DDSequence(std::vector<PulseLabel> pulses);
  static DDSequence parse(std::string_view text);

  int length() const { return static_cast<int>(pulses_.size()); }
  const std::vector<PulseLabel>& pulses() const { return pulses_; }
  PulseLabel operator[](int i) const { return pulses_[i]; }
  std::string str() const { return format_pulses(pulses_); }

  // Dense code: 3 bits per site. Unique for L <= 21.
  std::uint64_t code() const;

  friend bool operator==(const DDSequence&, const DDSequence&) = default;

 private:
  std::vector<PulseLabel> pulses_;
};

enum class TimingMode : std::uint8_t { Symmetric, AsymEarly, AsymLate };

std::string_view timing_name(TimingMode mode);
TimingMode parse_timing_mode(std::string_view name);
// Color c (0-based): 0 symmetric, 1 early, 2 late, then cycling.
TimingMode default_timing_mode(int color);

// Colors are 0-based internally and 1-based in serialized form.
struct ColorAssignment {
  std::vector<int> color;
  int num_colors = 0;
};

ColorAssignment color_graph(const std::vector<Edge>& edges, int num_qubits, int max_colors);

struct DDStrategy {
  std::vector<DDSequence> sequences;
  std::vector<TimingMode> timing;

  int num_colors() const { return static_cast<int>(sequences.size()); }
  int length() const { return sequences.empty() ? 0 : sequences.front().length(); }
  // Throws InvalidSequence if colors disagree in length or timing size.
  void validate() const;

  // Same sequence on every color; staggered uses the default per-color
  // modes, otherwise all colors are symmetric.
  static DDStrategy replicate(const DDSequence& seq, int colors, bool staggered = true);

  std::string key() const;
  friend bool operator==(const DDStrategy&, const DDStrategy&) = default;
};

nlohmann::json to_json(const DDStrategy& s);
DDStrategy strategy_from_json(const nlohmann::json& j);

struct Population {
  std::vector<DDStrategy> strategies;
  std::vector<double> utilities;  // empty when unevaluated
  int generation = 0;

  int size() const { return static_cast<int>(strategies.size()); }
};

// Uniform initial population of K strategies (8 | K), each replicating one
// sequence across all colors. Per site, every label occurs K/8 times.
Population uniform_initial_population(int K, int L, std::uint64_t seed, int colors = 1);

// The 16-sequence L = 8 population built from the base permutations
// IpImXpXmYpYmZpZm and IpXpYpZpImXmYmZm and their cyclic shifts.
std::vector<DDSequence> reference_population();

struct NamedStrategy {
  std::string name;
  std::optional<DDStrategy> strategy;  // nullopt marks an unsupported family
};

namespace sequences {
DDSequence cpmg();
DDSequence cpmg_pm();
DDSequence xy4();
DDSequence edd();
}  // namespace sequences

// Canonical baselines, aligned and staggered, plus the unsupported UR16 entry.
std::vector<NamedStrategy> canonical_strategies(int colors);

using BigInt = boost::multiprecision::cpp_int;
BigInt strategy_space_size(int group_size, int L, int C);
BigInt equivalence_class_count(int group_size, int L);

}  // namespace ddforge
