#include "ddforge/scheduler.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>

namespace ddforge {

ScheduledCircuit schedule_asap(const CircuitSpec& spec, const GateTimingModel& timing) {
  timing.validate();
  Topology topo(spec.num_qubits, spec.coupling);
  std::vector<double> ready(spec.num_qubits, 0.0);
  std::vector<Instruction> out;
  std::vector<int> measures;
  for (const auto& op : spec.ops) {
    const int arity = gate_arity(op.kind);
    for (int k = 0; k < arity; ++k)
      if (op.qubits[k] < 0 || op.qubits[k] >= spec.num_qubits) throw InvalidArgument("gate qubit out of range");
    if (arity == 2 && !topo.has_edge(op.qubits[0], op.qubits[1]))
      throw InvalidEdge("two-qubit gate on (" + std::to_string(op.qubits[0]) + "," +
                        std::to_string(op.qubits[1]) + ") is not a coupling edge");
    Instruction ins;
    ins.kind = op.kind;
    ins.qubits = op.qubits;
    if (arity == 1) ins.qubits[1] = -1;
    ins.params = op.params;
    ins.pulse = op.pulse;
    ins.dt = timing.duration(op.kind);
    if (op.kind == GateKind::Measure) {
      ins.clbit = static_cast<int>(measures.size());
      measures.push_back(static_cast<int>(out.size()));
      out.push_back(ins);
      continue;
    }
    double t = ready[ins.qubits[0]];
    if (arity == 2) t = std::max(t, ready[ins.qubits[1]]);
    ins.t0 = t;
    for (int k = 0; k < arity; ++k) ready[ins.qubits[k]] = ins.t1();
    out.push_back(ins);
  }
  double end = 0.0;
  for (const auto& i : out)
    if (i.kind != GateKind::Measure) end = std::max(end, i.t1());
  for (int idx : measures) out[idx].t0 = end;
  ScheduledCircuit c(spec.num_qubits, spec.coupling);
  c.set_instructions(std::move(out));
  c.validate();
  return c;
}

std::vector<IdleGap> find_idle_gaps(const ScheduledCircuit& circuit, double min_duration) {
  const int n = circuit.num_qubits();
  std::vector<double> last_end(n, -1.0);
  std::vector<IdleGap> gaps;
  for (const auto& ins : circuit.instructions()) {
    for (int k = 0; k < ins.arity(); ++k) {
      const int q = ins.qubits[k];
      if (last_end[q] >= 0.0) {
        const double len = ins.t0 - last_end[q];
        if (len > 1e-9 && len >= min_duration) gaps.push_back({q, last_end[q], ins.t0});
      }
      last_end[q] = std::max(last_end[q], ins.t1());
    }
  }
  std::stable_sort(gaps.begin(), gaps.end(), [](const IdleGap& a, const IdleGap& b) {
    return a.qubit != b.qubit ? a.qubit < b.qubit : a.start < b.start;
  });
  return gaps;
}

std::vector<double> pulse_starts(TimingMode mode, double t0, double T, int n, double tp) {
  const double slack = T - n * tp;
  const double spacing = slack / n;
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) {
    switch (mode) {
      case TimingMode::Symmetric: s[k] = t0 + spacing / 2 + k * (spacing + tp); break;
      case TimingMode::AsymEarly: s[k] = t0 + k * (spacing + tp); break;
      case TimingMode::AsymLate: s[k] = t0 + spacing + k * (spacing + tp); break;
    }
  }
  return s;
}

DDInsertion insert_dd(const ScheduledCircuit& circuit, const DDStrategy& strategy,
                      const ColorAssignment& coloring, const GateTimingModel& timing,
                      const InsertOptions& options) {
  strategy.validate();
  timing.validate();
  if (static_cast<int>(coloring.color.size()) < circuit.num_qubits())
    throw InvalidArgument("coloring does not cover every qubit");
  if (options.repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  const int L = strategy.length();
  const double tp = timing.pulse;
  DDInsertion out;
  std::vector<Instruction> pulses;
  for (const auto& gap : find_idle_gaps(circuit)) {
    const int color = coloring.color[gap.qubit];
    if (color < 0 || color >= strategy.num_colors())
      throw InvalidArgument("strategy has no sequence for color " + std::to_string(color + 1));
    const int fits = static_cast<int>((gap.length() + 1e-9) / (L * tp));
    const int reps = std::min(options.repetitions, fits);
    if (reps == 0) {
      ++out.skipped_gaps;
      continue;
    }
    const auto& seq = strategy.sequences[color];
    const auto starts = pulse_starts(strategy.timing[color], gap.start, gap.length(), reps * L, tp);
    for (int k = 0; k < reps * L; ++k) {
      Instruction ins;
      ins.kind = GateKind::Pulse;
      ins.qubits = {gap.qubit, -1};
      ins.pulse = seq[k % L];
      ins.t0 = starts[k];
      ins.dt = tp;
      pulses.push_back(ins);
    }
    ++out.filled_gaps;
    out.pulses += reps * L;
  }
  out.circuit = circuit;
  out.circuit.add_all(pulses);
  return out;
}

}  // namespace ddforge
