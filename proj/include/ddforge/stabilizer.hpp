#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/rng.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ddforge {

// Aaronson-Gottesman stabilizer tableau.
class Tableau {
 public:
  explicit Tableau(int n);

  int num_qubits() const { return n_; }
  void h(int q);
  void s(int q);
  void cx(int c, int t);

  // Z-basis measurement. Random outcomes take `forced` if given, otherwise a
  // bit from rng (which must then be non-null).
  struct Outcome {
    int bit;
    bool random;
  };
  Outcome measure(int q, std::optional<int> forced = std::nullopt, Rng* rng = nullptr);
  bool is_deterministic(int q) const;

 private:
  void rowsum(int h, int i);
  int n_;
  // rows 0..n-1 destabilizers, n..2n-1 stabilizers, 2n scratch
  std::vector<std::vector<std::uint8_t>> x_, z_;
  std::vector<std::uint8_t> r_;
};

bool is_clifford_instruction(const Instruction& ins);
bool is_clifford_circuit(const ScheduledCircuit& circuit);

// Applies one instruction (ignoring Measure); throws UnsupportedGate for
// non-Clifford gates.
void apply_clifford(Tableau& t, const Instruction& ins);

// Exact output distribution of a Clifford circuit by branching over random
// measurement outcomes (at most max_random_bits of them).
std::map<std::string, double> clifford_distribution(const ScheduledCircuit& circuit, int max_random_bits = 20);

// Throws NondeterministicOutcome when any measured qubit is random.
std::string clifford_target(const ScheduledCircuit& circuit);

}  // namespace ddforge
