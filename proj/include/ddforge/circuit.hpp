#pragma once

#include "ddforge/gates.hpp"
#include "ddforge/graph.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace ddforge {

struct Instruction {
  GateKind kind = GateKind::I;
  std::array<int, 2> qubits{-1, -1};
  double t0 = 0.0;
  double dt = 0.0;
  std::array<double, 3> params{};
  PulseLabel pulse{};  // Pulse only
  int clbit = -1;      // Measure only: position in the output bitstring

  int arity() const { return qubits[1] < 0 ? 1 : 2; }
  double t1() const { return t0 + dt; }
  bool acts_on(int q) const { return qubits[0] == q || qubits[1] == q; }
};

struct GateTimingModel {
  double one_qubit = 50.0;
  double two_qubit = 500.0;
  double pulse = 50.0;
  double measurement = 700.0;

  void validate() const;
  double duration(GateKind kind) const;
};

// Timed circuit. Instructions are kept sorted by start time; among equal
// start times the original order is the application order. Output bitstrings
// list measured qubits by clbit, left to right.
class ScheduledCircuit {
 public:
  ScheduledCircuit() = default;
  ScheduledCircuit(int num_qubits, std::vector<Edge> edges) : num_qubits_(num_qubits), edges_(std::move(edges)) {}

  int num_qubits() const { return num_qubits_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }

  // Appends and keeps the list sorted (stable on start time).
  void add(const Instruction& ins);
  void add_all(const std::vector<Instruction>& ins);
  void set_instructions(std::vector<Instruction> ins);

  double duration() const;
  // Qubits ordered by clbit.
  std::vector<int> measured_qubits() const;
  int num_measured() const;
  int count(GateKind kind) const;

  // Throws InvalidArgument on overlaps or out-of-range qubits.
  void validate() const;

  nlohmann::json to_json() const;
  static ScheduledCircuit from_json(const nlohmann::json& j);

 private:
  int num_qubits_ = 0;
  std::vector<Edge> edges_;
  std::vector<Instruction> instructions_;
};

// Untimed gate in program order.
struct GateOp {
  GateKind kind;
  std::array<int, 2> qubits{-1, -1};
  std::array<double, 3> params{};
  PulseLabel pulse{};
};

struct CircuitSpec {
  int num_qubits = 0;
  std::vector<Edge> coupling;
  std::vector<GateOp> ops;

  CircuitSpec& gate(GateKind k, int q, std::array<double, 3> p = {}) {
    ops.push_back({k, {q, -1}, p, {}});
    return *this;
  }
  CircuitSpec& gate2(GateKind k, int a, int b) {
    ops.push_back({k, {a, b}, {}, {}});
    return *this;
  }
  CircuitSpec& measure(int q) {
    ops.push_back({GateKind::Measure, {q, -1}, {}, {}});
    return *this;
  }
};

std::string format_bits(std::uint64_t bits, int n);

}  // namespace ddforge
