#pragma once

#include "ddforge/circuit.hpp"
#include "ddforge/strategy.hpp"

namespace ddforge {

struct IdleGap {
  int qubit;
  double start;
  double end;
  double length() const { return end - start; }
};

// ASAP schedule. Measurements are aligned: all start together once every
// non-measurement instruction has finished. Clbits follow measurement order.
ScheduledCircuit schedule_asap(const CircuitSpec& spec, const GateTimingModel& timing);

// Maximal per-qubit idle intervals strictly between a qubit's first and last
// instruction, of length >= min_duration (and > 0).
std::vector<IdleGap> find_idle_gaps(const ScheduledCircuit& circuit, double min_duration = 0.0);

// Start times of n pulses of width tp in [t0, t0 + T) for a timing mode.
std::vector<double> pulse_starts(TimingMode mode, double t0, double T, int n, double tp);

struct InsertOptions {
  int repetitions = 1;  // sequence repeated this many times per gap (fewer if it does not fit)
};

struct DDInsertion {
  ScheduledCircuit circuit;
  int filled_gaps = 0;
  int skipped_gaps = 0;  // idle gaps shorter than one sequence
  int pulses = 0;
};

DDInsertion insert_dd(const ScheduledCircuit& circuit, const DDStrategy& strategy,
                      const ColorAssignment& coloring, const GateTimingModel& timing,
                      const InsertOptions& options = {});

}  // namespace ddforge
