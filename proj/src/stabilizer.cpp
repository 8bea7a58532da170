#include "ddforge/stabilizer.hpp"

#include "ddforge/errors.hpp"

#include <cmath>
#include <functional>

namespace ddforge {

Tableau::Tableau(int n)
    : n_(n), x_(2 * n + 1, std::vector<std::uint8_t>(n, 0)), z_(2 * n + 1, std::vector<std::uint8_t>(n, 0)),
      r_(2 * n + 1, 0) {
  for (int i = 0; i < n; ++i) {
    x_[i][i] = 1;
    z_[n + i][i] = 1;
  }
}

void Tableau::h(int q) {
  for (int i = 0; i < 2 * n_; ++i) {
    r_[i] ^= x_[i][q] & z_[i][q];
    std::swap(x_[i][q], z_[i][q]);
  }
}

void Tableau::s(int q) {
  for (int i = 0; i < 2 * n_; ++i) {
    r_[i] ^= x_[i][q] & z_[i][q];
    z_[i][q] ^= x_[i][q];
  }
}

void Tableau::cx(int c, int t) {
  for (int i = 0; i < 2 * n_; ++i) {
    r_[i] ^= x_[i][c] & z_[i][t] & (x_[i][t] ^ z_[i][c] ^ 1);
    x_[i][t] ^= x_[i][c];
    z_[i][c] ^= z_[i][t];
  }
}

namespace {
int g(int x1, int z1, int x2, int z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return z2 - x2;
  if (x1 && !z1) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}
}  // namespace

void Tableau::rowsum(int h, int i) {
  int sum = 2 * r_[h] + 2 * r_[i];
  for (int j = 0; j < n_; ++j) sum += g(x_[i][j], z_[i][j], x_[h][j], z_[h][j]);
  sum = ((sum % 4) + 4) % 4;
  r_[h] = sum == 2 ? 1 : 0;
  for (int j = 0; j < n_; ++j) {
    x_[h][j] ^= x_[i][j];
    z_[h][j] ^= z_[i][j];
  }
}

bool Tableau::is_deterministic(int q) const {
  for (int p = n_; p < 2 * n_; ++p)
    if (x_[p][q]) return false;
  return true;
}

Tableau::Outcome Tableau::measure(int a, std::optional<int> forced, Rng* rng) {
  int p = -1;
  for (int i = n_; i < 2 * n_; ++i)
    if (x_[i][a]) {
      p = i;
      break;
    }
  if (p >= 0) {
    for (int i = 0; i < 2 * n_; ++i)
      if (i != p && x_[i][a]) rowsum(i, p);
    x_[p - n_] = x_[p];
    z_[p - n_] = z_[p];
    r_[p - n_] = r_[p];
    std::fill(x_[p].begin(), x_[p].end(), 0);
    std::fill(z_[p].begin(), z_[p].end(), 0);
    z_[p][a] = 1;
    int bit;
    if (forced) bit = *forced;
    else if (rng) bit = static_cast<int>(rng->below(2));
    else throw InvalidArgument("random measurement needs an outcome source");
    r_[p] = static_cast<std::uint8_t>(bit);
    return {bit, true};
  }
  const int s = 2 * n_;
  std::fill(x_[s].begin(), x_[s].end(), 0);
  std::fill(z_[s].begin(), z_[s].end(), 0);
  r_[s] = 0;
  for (int i = 0; i < n_; ++i)
    if (x_[i][a]) rowsum(s, i + n_);
  return {r_[s], false};
}

namespace {

// Number of quarter turns if angle is a multiple of pi/2.
std::optional<int> quarter_turns(double angle) {
  const double k = angle / (M_PI / 2);
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) return std::nullopt;
  return static_cast<int>(((static_cast<long long>(r) % 4) + 4) % 4);
}

void rz_quarters(Tableau& t, int q, int k) {
  for (int i = 0; i < k; ++i) t.s(q);
}

void sx(Tableau& t, int q) {
  t.h(q);
  t.s(q);
  t.h(q);
}

void pauli(Tableau& t, int q, Frame f) {
  if (f == Frame::I) return;
  if (f == Frame::Z || f == Frame::Y) rz_quarters(t, q, 2);
  if (f == Frame::X || f == Frame::Y) {
    t.h(q);
    rz_quarters(t, q, 2);
    t.h(q);
  }
}

}  // namespace

bool is_clifford_instruction(const Instruction& ins) {
  switch (ins.kind) {
    case GateKind::T:
    case GateKind::Tdg: return false;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: return quarter_turns(ins.params[0]).has_value();
    case GateKind::U:
      return quarter_turns(ins.params[0]).has_value() && quarter_turns(ins.params[1]).has_value() &&
             quarter_turns(ins.params[2]).has_value();
    default: return true;
  }
}

bool is_clifford_circuit(const ScheduledCircuit& circuit) {
  for (const auto& i : circuit.instructions())
    if (!is_clifford_instruction(i)) return false;
  return true;
}

void apply_clifford(Tableau& t, const Instruction& ins) {
  if (!is_clifford_instruction(ins)) throw UnsupportedGate(std::string("non-Clifford gate ") + std::string(gate_name(ins.kind)));
  const int q = ins.qubits[0];
  switch (ins.kind) {
    case GateKind::I:
    case GateKind::Measure: return;
    case GateKind::X: pauli(t, q, Frame::X); return;
    case GateKind::Y: pauli(t, q, Frame::Y); return;
    case GateKind::Z: pauli(t, q, Frame::Z); return;
    case GateKind::H: t.h(q); return;
    case GateKind::S: t.s(q); return;
    case GateKind::Sdg: rz_quarters(t, q, 3); return;
    case GateKind::SX: sx(t, q); return;
    case GateKind::SXdg:
      t.h(q);
      rz_quarters(t, q, 3);
      t.h(q);
      return;
    case GateKind::RZ: rz_quarters(t, q, *quarter_turns(ins.params[0])); return;
    case GateKind::RX:
      t.h(q);
      rz_quarters(t, q, *quarter_turns(ins.params[0]));
      t.h(q);
      return;
    case GateKind::RY:
      // RY = S RX Sdg
      rz_quarters(t, q, 3);
      t.h(q);
      rz_quarters(t, q, *quarter_turns(ins.params[0]));
      t.h(q);
      t.s(q);
      return;
    case GateKind::U:
      // RZ(p0) SX RZ(p1) SX RZ(p2), rightmost first
      rz_quarters(t, q, *quarter_turns(ins.params[2]));
      sx(t, q);
      rz_quarters(t, q, *quarter_turns(ins.params[1]));
      sx(t, q);
      rz_quarters(t, q, *quarter_turns(ins.params[0]));
      return;
    case GateKind::Pulse: pauli(t, q, ins.pulse.frame()); return;
    case GateKind::CX: t.cx(q, ins.qubits[1]); return;
    case GateKind::CZ:
      t.h(ins.qubits[1]);
      t.cx(q, ins.qubits[1]);
      t.h(ins.qubits[1]);
      return;
    case GateKind::SWAP:
      t.cx(q, ins.qubits[1]);
      t.cx(ins.qubits[1], q);
      t.cx(q, ins.qubits[1]);
      return;
    default: throw UnsupportedGate(std::string("unsupported gate ") + std::string(gate_name(ins.kind)));
  }
}

namespace {

Tableau run_unitary_part(const ScheduledCircuit& circuit) {
  Tableau t(circuit.num_qubits());
  for (const auto& ins : circuit.instructions())
    if (ins.kind != GateKind::Measure) apply_clifford(t, ins);
  return t;
}

}  // namespace

std::map<std::string, double> clifford_distribution(const ScheduledCircuit& circuit, int max_random_bits) {
  const Tableau base = run_unitary_part(circuit);
  const auto measured = circuit.measured_qubits();
  const int m = static_cast<int>(measured.size());
  std::map<std::string, double> out;
  std::function<void(Tableau, int, std::string, double, int)> branch = [&](Tableau t, int k, std::string bits,
                                                                          double prob, int random_bits) {
    if (k == m) {
      out[bits] += prob;
      return;
    }
    const int q = measured[k];
    if (t.is_deterministic(q)) {
      auto o = t.measure(q);
      branch(std::move(t), k + 1, bits + static_cast<char>('0' + o.bit), prob, random_bits);
      return;
    }
    if (random_bits >= max_random_bits) throw InvalidArgument("too many random measurement outcomes to enumerate");
    for (int b = 0; b < 2; ++b) {
      Tableau c = t;
      c.measure(q, b);
      branch(std::move(c), k + 1, bits + static_cast<char>('0' + b), prob / 2, random_bits + 1);
    }
  };
  branch(base, 0, std::string(), 1.0, 0);
  return out;
}

std::string clifford_target(const ScheduledCircuit& circuit) {
  Tableau t = run_unitary_part(circuit);
  std::string bits;
  for (int q : circuit.measured_qubits()) {
    if (!t.is_deterministic(q)) throw NondeterministicOutcome("qubit " + std::to_string(q) + " is not stabilized by +/-Z");
    bits += static_cast<char>('0' + t.measure(q).bit);
  }
  return bits;
}

}  // namespace ddforge
