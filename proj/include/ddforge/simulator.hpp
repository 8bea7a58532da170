#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/kernels.hpp"
#include "ddforge/noise.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace ddforge {

struct CountsDistribution {
  std::map<std::string, int> counts;
  int shots = 0;
  int num_bits = 0;

  int count(const std::string& bits) const;
  nlohmann::json to_json() const;
};

using ProbabilityMap = std::map<std::string, double>;

struct SimOptions {
  // Number of independent noise realizations per call; shot s uses
  // realization s mod trajectories. 0 means one realization per shot.
  int trajectories = 0;
  // Longest field-evolution span between splitting points for qubits with
  // transverse fields, ns.
  double max_step = 200.0;
  int max_qubits = 14;
  // Keep trailing diagonal phases so evolve() returns the exact final state
  // rather than one with the same Z-basis statistics.
  bool full_state = false;
};

// Per-qubit static field (x, y, z), rad/ns.
struct FieldRealization {
  std::vector<std::array<double, 3>> h;
};

// Trajectory-independent form of a circuit under a noise model.
class CompiledCircuit {
 public:
  struct Op {
    bool two_qubit = false;
    int a = -1, b = -1;
    Mat2 gate1;  // two_qubit == false
    Mat4 gate2;  // two_qubit == true
    // Field rotation durations before and after the gate, and the span used
    // for the dephasing flip probability.
    double pre_a = 0, post_a = 0, span_a = 0;
    double pre_b = 0, post_b = 0, span_b = 0;
    bool final_node = false;
    // ZZ phases flushed before the op.
    std::vector<int> diag_bits;
    std::vector<kernels::cplx> phase0, phase1;  // pair form (one-qubit ops)
    std::vector<kernels::cplx> table;           // full form (two-qubit ops)
  };

  int num_qubits = 0;
  std::vector<int> measured;  // qubits by clbit
  std::vector<Op> ops;
  NoiseModel noise;
};

CompiledCircuit compile_circuit(const ScheduledCircuit& circuit, const NoiseModel& noise,
                                const SimOptions& options = {});

FieldRealization sample_fields(const NoiseModel& noise, int num_qubits, Rng& rng);

// One trajectory. dephasing_rng may be null when the model has no dephasing.
std::vector<kernels::cplx> evolve(const CompiledCircuit& cc, const FieldRealization& fields,
                                  Rng* dephasing_rng, bool parallel_kernels = true);

CountsDistribution simulate_counts(const ScheduledCircuit& circuit, const NoiseModel& noise, int shots,
                                   std::uint64_t seed, const SimOptions& options = {});

// Exact noiseless distribution over measured qubits. Circuits above the
// statevector limit go through the stabilizer path when Clifford-only.
ProbabilityMap simulate_ideal(const ScheduledCircuit& circuit, int max_qubits = 14);

// Noiseless final statevector (no measurement).
std::vector<kernels::cplx> ideal_statevector(const ScheduledCircuit& circuit, int max_qubits = 14);

// Deterministic outcome of a Clifford circuit.
std::string target_bitstring(const ScheduledCircuit& circuit);

}  // namespace ddforge
