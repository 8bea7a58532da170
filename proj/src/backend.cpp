#include "ddforge/backend.hpp"

#include "ddforge/errors.hpp"

namespace ddforge {

std::uint64_t circuit_fingerprint(const ScheduledCircuit& circuit) { return fnv1a(circuit.to_json().dump()); }

std::vector<CountsDistribution> LocalSimulatorBackend::submit(const std::vector<ScheduledCircuit>& circuits, int shots,
                                                              std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be positive");
  std::vector<CountsDistribution> out;
  out.reserve(circuits.size());
  for (const auto& c : circuits) {
    if (c.num_qubits() > options_.max_qubits)
      throw TooManyQubits(std::to_string(c.num_qubits()) + " qubits exceeds the backend limit");
    out.push_back(simulate_counts(c, noise_, shots, derive_seed(seed, {circuit_fingerprint(c)}), options_));
  }
  return out;
}

std::vector<CountsDistribution> HardwareBackendStub::submit(const std::vector<ScheduledCircuit>&, int, std::uint64_t) {
  throw Unsupported("no client for " + device_ + " is bundled");
}

}  // namespace ddforge
