#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/graph.hpp"
#include "ddforge/rng.hpp"
#include "ddforge/simulator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ddforge {

struct TargetedCircuit {
  ScheduledCircuit circuit;
  std::string target;
};

// Bernstein-Vazirani with secret 1^n on n + 1 qubits; qubit n is the ancilla
// on all-to-all and star-like couplings. On a path 0-1-..-n the ancilla starts
// at n and walks down the chain with CX(b,a) CX(a,b) pairs.
TargetedCircuit bv_circuit(int n, const Topology& topology, const GateTimingModel& timing = {});

struct GhzCircuit {
  ScheduledCircuit circuit;
  ProbabilityMap ideal;
};

// H on the topology center, then CX fan-out along a BFS tree.
GhzCircuit ghz_circuit(int n, const Topology& topology, const GateTimingModel& timing = {});

int grover_default_iterations(int n);
// Phase-oracle Grover on all-to-all coupling. Multi-controlled phases are
// expanded as parity phase polynomials (Gray-code CX ladders plus RZ), so all
// oracles share one schedule and differ only in RZ angles.
ScheduledCircuit grover_circuit(int n, const std::string& oracle_bits, int iterations,
                                const GateTimingModel& timing = {});
double grover_success_probability(int n, int iterations);

// Rounds every non-Clifford phase to a neighbouring quarter turn, preserving
// the expected angle. One-qubit non-phase gates go through the
// RZ-SX-RZ-SX-RZ form.
ScheduledCircuit cliffordize(const ScheduledCircuit& circuit, Rng& rng);
double round_phase(double phi, Rng& rng);

Instruction inverse_instruction(const Instruction& ins);

// motif, random Pauli layer, time-mirrored inverse, aligned measurement.
TargetedCircuit mirror_circuit(const ScheduledCircuit& motif, Rng& rng, const GateTimingModel& timing = {});

std::vector<Edge> edge_grab_sample(const std::vector<Edge>& edges, double xi, Rng& rng);

enum class MrbFlavor { Clifford, Su2 };

struct MRBSpec {
  int N = 6;
  int D = 4;
  double xi = 0.25;
  MrbFlavor flavor = MrbFlavor::Clifford;
  std::vector<Edge> edges;  // empty: linear chain on N
  std::uint64_t seed = 0;

  void validate() const;
};

TargetedCircuit mrb_circuit(const MRBSpec& spec, const GateTimingModel& timing = {});

std::vector<TargetedCircuit> mrb_training_set(int N, int layers, int count, MrbFlavor flavor, std::uint64_t seed,
                                              const std::vector<Edge>& edges = {}, double xi = 0.25,
                                              const GateTimingModel& timing = {});

// The 24 one-qubit Cliffords as (p0, p1, p2) U angles.
const std::vector<std::array<double, 3>>& clifford_1q_angles();

}  // namespace ddforge
