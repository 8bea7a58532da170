#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/noise.hpp"
#include "ddforge/simulator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ddforge {

struct BackendCapabilities {
  int max_qubits = 0;
  bool clifford_fast_path = false;
};

class ExecutionBackend {
 public:
  virtual ~ExecutionBackend() = default;
  virtual std::string name() const = 0;
  virtual BackendCapabilities capabilities() const = 0;
  // One distribution per circuit, in order. Each circuit's counts depend only
  // on (circuit, shots, seed), never on its batch neighbours.
  virtual std::vector<CountsDistribution> submit(const std::vector<ScheduledCircuit>& circuits, int shots,
                                                 std::uint64_t seed) = 0;
};

class LocalSimulatorBackend final : public ExecutionBackend {
 public:
  LocalSimulatorBackend(NoiseModel noise, SimOptions options = {}) : noise_(std::move(noise)), options_(options) {}

  std::string name() const override { return "local-simulator"; }
  BackendCapabilities capabilities() const override { return {options_.max_qubits, false}; }
  std::vector<CountsDistribution> submit(const std::vector<ScheduledCircuit>& circuits, int shots,
                                         std::uint64_t seed) override;

  const NoiseModel& noise() const { return noise_; }
  const SimOptions& options() const { return options_; }

 private:
  NoiseModel noise_;
  SimOptions options_;
};

// Placeholder for a remote device client; every submission throws Unsupported.
class HardwareBackendStub final : public ExecutionBackend {
 public:
  explicit HardwareBackendStub(std::string device) : device_(std::move(device)) {}
  std::string name() const override { return "hardware:" + device_; }
  BackendCapabilities capabilities() const override { return {0, false}; }
  std::vector<CountsDistribution> submit(const std::vector<ScheduledCircuit>&, int, std::uint64_t) override;

 private:
  std::string device_;
};

std::uint64_t circuit_fingerprint(const ScheduledCircuit& circuit);

}  // namespace ddforge
