#include "ddforge/workloads.hpp"

#include "ddforge/errors.hpp"
#include "ddforge/scheduler.hpp"
#include "ddforge/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace ddforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi / 2;

bool path_topology(const Topology& t, int n) {
  for (int i = 0; i + 1 < n; ++i)
    if (!t.has_edge(i, i + 1)) return false;
  return true;
}

GateOp u_op(int q, const std::array<double, 3>& a) { return {GateKind::U, {q, -1}, a, {}}; }

const std::vector<std::array<double, 3>>& clifford_table();

// Clifford matrices get exact quarter-turn angles.
std::array<double, 3> angles_of(const Mat2& m) {
  for (const auto& a : clifford_table())
    if (equal_up_to_phase(u_matrix(a[0], a[1], a[2]), m, 1e-9)) return a;
  return zsx_angles(m);
}

Mat2 u_of(const std::array<double, 3>& a) { return u_matrix(a[0], a[1], a[2]); }

// Per-qubit Pauli frame as (x, z) bits.
struct PauliFrame {
  std::vector<std::uint8_t> x, z;
  explicit PauliFrame(int n) : x(n, 0), z(n, 0) {}
  Mat2 matrix(int q) const {
    Frame f = static_cast<Frame>(x[q] | (z[q] << 1));
    return pauli_matrix(f);
  }
  void set(int q, Frame f) {
    auto v = static_cast<std::uint8_t>(f);
    x[q] = v & 1;
    z[q] = (v >> 1) & 1;
  }
  void cx(int c, int t) {
    x[t] ^= x[c];
    z[c] ^= z[t];
  }
};

Frame random_pauli(Rng& rng) { return static_cast<Frame>(rng.below(4)); }

Mat2 haar_su2(Rng& rng) {
  double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
  double n = std::sqrt(a * a + b * b + c * c + d * d);
  a /= n, b /= n, c /= n, d /= n;
  Mat2 m;
  m << std::complex<double>(a, b), std::complex<double>(-c, d), std::complex<double>(c, d),
      std::complex<double>(a, -b);
  return m;
}

}  // namespace

TargetedCircuit bv_circuit(int n, const Topology& topology, const GateTimingModel& timing) {
  if (n < 1) throw InvalidArgument("BV needs at least one problem qubit");
  if (topology.num_qubits() < n + 1)
    throw TopologyTooSmall("BV-" + std::to_string(n) + " needs " + std::to_string(n + 1) + " qubits");
  const int anc = n;
  CircuitSpec spec;
  spec.num_qubits = topology.num_qubits();
  spec.coupling = topology.edges();
  std::vector<int> position(n);  // final location of problem qubit i
  bool star = true;
  for (int i = 0; i < n; ++i) star = star && topology.has_edge(i, anc);

  spec.gate(GateKind::X, anc);
  for (int q = 0; q <= n; ++q) spec.gate(GateKind::H, q);
  if (star) {
    for (int i = 0; i < n; ++i) {
      spec.gate2(GateKind::CX, i, anc);
      position[i] = i;
    }
  } else if (path_topology(topology, n + 1)) {
    // Ancilla at position p + 1 meets problem qubit p; CX(p+1,p) CX(p,p+1)
    // equals CX(p,p+1) followed by SWAP(p,p+1).
    for (int p = n - 1; p >= 0; --p) {
      if (p > 0) {
        spec.gate2(GateKind::CX, p + 1, p);
        spec.gate2(GateKind::CX, p, p + 1);
        position[p] = p + 1;
      } else {
        spec.gate2(GateKind::CX, 0, 1);
        position[0] = 0;
      }
    }
  } else {
    throw TopologyTooSmall("BV needs a path 0..n or an ancilla adjacent to every problem qubit");
  }
  for (int i = 0; i < n; ++i) spec.gate(GateKind::H, position[i]);
  for (int i = 0; i < n; ++i) spec.measure(position[i]);
  return {schedule_asap(spec, timing), std::string(n, '1')};
}

GhzCircuit ghz_circuit(int n, const Topology& topology, const GateTimingModel& timing) {
  if (n < 2) throw InvalidArgument("GHZ needs at least two qubits");
  if (topology.num_qubits() < n) throw TopologyTooSmall("GHZ-" + std::to_string(n));
  Topology t = topology.num_qubits() == n ? topology : topology.prefix(n);
  if (!t.connected()) throw TopologyDisconnected("GHZ needs a connected coupling graph");
  CircuitSpec spec;
  spec.num_qubits = n;
  spec.coupling = t.edges();
  int root = t.center();
  spec.gate(GateKind::H, root);
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(root);
  seen[root] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : t.neighbors(u))
      if (!seen[v]) {
        seen[v] = true;
        spec.gate2(GateKind::CX, u, v);
        q.push(v);
      }
  }
  for (int i = 0; i < n; ++i) spec.measure(i);
  return {schedule_asap(spec, timing), {{std::string(n, '0'), 0.5}, {std::string(n, '1'), 0.5}}};
}

int grover_default_iterations(int n) {
  double theta = std::asin(std::pow(2.0, -n / 2.0));
  return std::max(1, static_cast<int>(std::lround(kPi / (4 * theta) - 0.5)));
}

double grover_success_probability(int n, int iterations) {
  double theta = std::asin(std::pow(2.0, -n / 2.0));
  return std::pow(std::sin((2 * iterations + 1) * theta), 2);
}

namespace {

// exp(i pi prod_i y_i) with y_i = x_i for marked[i] = 1 and 1 - x_i otherwise,
// up to global phase.
void phase_polynomial_mcz(CircuitSpec& spec, int n, const std::string& marked) {
  auto coefficient = [&](unsigned subset) {
    int size = std::popcount(subset);
    int flips = 0;
    for (int i = 0; i < n; ++i)
      if (((subset >> i) & 1) && marked[i] == '0') ++flips;
    double c = (size % 2 ? 1.0 : -1.0) * kPi / std::ldexp(1.0, n - 1);
    return flips % 2 ? -c : c;
  };
  for (int m = n - 1; m >= 0; --m) {
    const unsigned top = 1u << m;
    spec.gate(GateKind::RZ, m, {coefficient(top)});
    unsigned gray = 0;
    for (unsigned k = 1; k < top; ++k) {
      int j = std::countr_zero(k);
      spec.gate2(GateKind::CX, j, m);
      gray ^= 1u << j;
      spec.gate(GateKind::RZ, m, {coefficient(top | gray)});
    }
    if (m > 0) spec.gate2(GateKind::CX, std::countr_zero(gray), m);
  }
}

}  // namespace

ScheduledCircuit grover_circuit(int n, const std::string& oracle_bits, int iterations, const GateTimingModel& timing) {
  if (n < 1 || n > 14) throw InvalidArgument("Grover width must be in 1..14");
  if (static_cast<int>(oracle_bits.size()) != n ||
      oracle_bits.find_first_not_of("01") != std::string::npos)
    throw InvalidArgument("oracle bitstring must have n characters in {0,1}");
  if (iterations < 1) throw InvalidArgument("Grover needs at least one iteration");
  auto topo = Topology::all_to_all(n);
  CircuitSpec spec;
  spec.num_qubits = n;
  spec.coupling = topo.edges();
  for (int q = 0; q < n; ++q) spec.gate(GateKind::H, q);
  const std::string zeros(n, '0');
  for (int it = 0; it < iterations; ++it) {
    phase_polynomial_mcz(spec, n, oracle_bits);
    for (int q = 0; q < n; ++q) spec.gate(GateKind::H, q);
    phase_polynomial_mcz(spec, n, zeros);
    for (int q = 0; q < n; ++q) spec.gate(GateKind::H, q);
  }
  for (int q = 0; q < n; ++q) spec.measure(q);
  return schedule_asap(spec, timing);
}

double round_phase(double phi, Rng& rng) {
  double p = std::fmod(phi, 2 * kPi);
  if (p < 0) p += 2 * kPi;
  double k = std::floor(p / kQuarter);
  double frac = p / kQuarter - k;
  if (frac < 1e-12) return k * kQuarter;
  if (frac > 1 - 1e-12) return k == 3 ? 0.0 : (k + 1) * kQuarter;
  double r = (rng.uniform() < frac ? k + 1 : k) * kQuarter;
  return r >= 2 * kPi - 1e-12 ? 0.0 : r;
}

ScheduledCircuit cliffordize(const ScheduledCircuit& circuit, Rng& rng) {
  std::vector<Instruction> out;
  out.reserve(circuit.instructions().size());
  for (Instruction ins : circuit.instructions()) {
    if (ins.kind == GateKind::Measure || is_clifford_instruction(ins)) {
      out.push_back(ins);
      continue;
    }
    if (ins.arity() == 2) throw UnsupportedGate(std::string(gate_name(ins.kind)));
    switch (ins.kind) {
      case GateKind::T: ins.params = {round_phase(kPi / 4, rng), 0, 0}; ins.kind = GateKind::RZ; break;
      case GateKind::Tdg: ins.params = {round_phase(-kPi / 4, rng), 0, 0}; ins.kind = GateKind::RZ; break;
      case GateKind::RZ: ins.params[0] = round_phase(ins.params[0], rng); break;
      default: {
        auto a = ins.kind == GateKind::U ? ins.params : angles_of(gate_matrix_1q(ins.kind, ins.params, ins.pulse));
        for (auto& x : a) x = round_phase(x, rng);
        ins.kind = GateKind::U;
        ins.params = a;
      }
    }
    out.push_back(ins);
  }
  ScheduledCircuit c(circuit.num_qubits(), circuit.edges());
  c.set_instructions(std::move(out));
  return c;
}

Instruction inverse_instruction(const Instruction& ins) {
  Instruction r = ins;
  switch (ins.kind) {
    case GateKind::I: case GateKind::X: case GateKind::Y: case GateKind::Z: case GateKind::H:
    case GateKind::CX: case GateKind::CZ: case GateKind::SWAP:
      break;
    case GateKind::S: r.kind = GateKind::Sdg; break;
    case GateKind::Sdg: r.kind = GateKind::S; break;
    case GateKind::T: r.kind = GateKind::Tdg; break;
    case GateKind::Tdg: r.kind = GateKind::T; break;
    case GateKind::SX: r.kind = GateKind::SXdg; break;
    case GateKind::SXdg: r.kind = GateKind::SX; break;
    case GateKind::RX: case GateKind::RY: case GateKind::RZ: r.params[0] = -ins.params[0]; break;
    case GateKind::U: r.params = angles_of(u_of(ins.params).adjoint()); break;
    case GateKind::Pulse: r.pulse = PulseLabel(ins.pulse.axis(), ins.pulse.sign() == Sign::Plus ? Sign::Minus : Sign::Plus); break;
    case GateKind::Measure: throw NonInvertibleGate("measure");
  }
  return r;
}

TargetedCircuit mirror_circuit(const ScheduledCircuit& motif, Rng& rng, const GateTimingModel& timing) {
  const int n = motif.num_qubits();
  const double T = motif.duration();
  std::vector<Instruction> ins;
  for (const auto& i : motif.instructions()) {
    if (i.kind == GateKind::Measure) throw NonInvertibleGate("motif contains a measurement");
    ins.push_back(i);
  }
  const double P = timing.one_qubit;
  std::string target(n, '0');
  for (int q = 0; q < n; ++q) {
    Frame f = random_pauli(rng);
    Instruction p;
    p.kind = f == Frame::I ? GateKind::I : f == Frame::X ? GateKind::X : f == Frame::Y ? GateKind::Y : GateKind::Z;
    p.qubits = {q, -1};
    p.t0 = T;
    p.dt = timing.duration(p.kind);
    ins.push_back(p);
  }
  const auto& m = motif.instructions();
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    Instruction r = inverse_instruction(*it);
    r.t0 = T + P + (T - it->t1());
    ins.push_back(r);
  }
  const double end = 2 * T + P;
  for (int q = 0; q < n; ++q) {
    Instruction meas;
    meas.kind = GateKind::Measure;
    meas.qubits = {q, -1};
    meas.t0 = end;
    meas.dt = timing.measurement;
    meas.clbit = q;
    ins.push_back(meas);
  }
  ScheduledCircuit c(n, motif.edges());
  c.add_all(ins);
  if (is_clifford_circuit(c)) {
    target = clifford_target(c);
  } else {
    auto ideal = simulate_ideal(c);
    auto best = std::max_element(ideal.begin(), ideal.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    if (best->second < 1 - 1e-9) throw NondeterministicOutcome("mirrored non-Clifford motif");
    target = best->first;
  }
  return {std::move(c), target};
}

std::vector<Edge> edge_grab_sample(const std::vector<Edge>& edges, double xi, Rng& rng) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("two-qubit density must be in [0, 1]");
  if (xi == 0.0 || edges.empty()) return {};
  int max_q = 0;
  std::vector<int> vertices;
  for (auto [a, b] : edges) {
    vertices.push_back(a);
    vertices.push_back(b);
    max_q = std::max({max_q, a, b});
  }
  std::sort(vertices.begin(), vertices.end());
  const int N = static_cast<int>(std::unique(vertices.begin(), vertices.end()) - vertices.begin());

  auto candidates = [&](Rng& r) {
    std::vector<Edge> shuffled = edges;
    r.shuffle(shuffled.begin(), shuffled.end());
    std::vector<bool> used(max_q + 1, false);
    std::vector<Edge> out;
    for (auto [a, b] : shuffled)
      if (!used[a] && !used[b] && a != b) {
        used[a] = used[b] = true;
        out.push_back({a, b});
      }
    return out;
  };

  std::uint64_t h = 0x6567;
  for (auto [a, b] : edges) h = derive_seed(h, {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
  Rng pre(h);
  double mean = 0.0;
  for (int i = 0; i < 100; ++i) mean += candidates(pre).size();
  mean /= 100.0;
  const double keep = std::min(1.0, xi * N / (2.0 * mean));

  std::vector<Edge> out;
  for (auto e : candidates(rng))
    if (rng.bernoulli(keep)) out.push_back(e);
  return out;
}

void MRBSpec::validate() const {
  if (N < 1) throw ConfigError("MRB width must be positive");
  if (D < 0 || D % 2) throw ConfigError("MRB depth must be even and non-negative");
  if (!(xi >= 0.0 && xi <= 1.0)) throw ConfigError("two-qubit density must be in [0, 1]");
  for (auto [a, b] : edges)
    if (a < 0 || b < 0 || a >= N || b >= N || a == b) throw ConfigError("MRB edge outside the width");
}

namespace {
const std::vector<std::array<double, 3>>& clifford_table() {
  static const std::vector<std::array<double, 3>> table = [] {
    std::vector<Mat2> group{Mat2::Identity()};
    const Mat2 gens[2] = {h_matrix(), rz(kQuarter)};
    for (std::size_t i = 0; i < group.size(); ++i)
      for (const auto& g : gens) {
        Mat2 m = g * group[i];
        bool fresh = std::none_of(group.begin(), group.end(), [&](const Mat2& x) { return equal_up_to_phase(x, m); });
        if (fresh) group.push_back(m);
      }
    std::vector<std::array<double, 3>> out;
    for (const auto& m : group) {
      auto a = zsx_angles(m);
      for (auto& x : a) x = std::round(x / kQuarter) * kQuarter;
      if (!equal_up_to_phase(u_matrix(a[0], a[1], a[2]), m, 1e-9)) throw Error("internal: Clifford table");
      out.push_back(a);
    }
    return out;
  }();
  return table;
}
}  // namespace

const std::vector<std::array<double, 3>>& clifford_1q_angles() { return clifford_table(); }

TargetedCircuit mrb_circuit(const MRBSpec& spec, const GateTimingModel& timing) {
  spec.validate();
  const int N = spec.N;
  if (spec.flavor == MrbFlavor::Su2 && N > 14) throw TooManyQubits("su2 MRB target needs a statevector");
  const auto edges = spec.edges.empty() ? Topology::linear(N).edges() : spec.edges;
  Rng rng(spec.seed);
  const auto& cliffords = clifford_1q_angles();
  auto random_clifford = [&] { return u_of(cliffords[rng.below(cliffords.size())]); };

  CircuitSpec cs;
  cs.num_qubits = N;
  cs.coupling = edges;
  auto layer_1q = [&](const std::vector<Mat2>& gates) {
    for (int q = 0; q < N; ++q) cs.ops.push_back(u_op(q, angles_of(gates[q])));
  };

  std::vector<Mat2> c0(N);
  for (auto& m : c0) m = random_clifford();
  layer_1q(c0);

  const int half = spec.D / 2;
  std::vector<std::vector<Mat2>> layers(half, std::vector<Mat2>(N));
  std::vector<std::vector<Edge>> cx(half);
  for (int l = 0; l < half; ++l) {
    std::vector<Mat2> dressed(N);
    for (int q = 0; q < N; ++q) {
      Mat2 g = spec.flavor == MrbFlavor::Clifford ? random_clifford() : haar_su2(rng);
      layers[l][q] = g * pauli_matrix(random_pauli(rng));
    }
    layer_1q(layers[l]);
    for (auto [a, b] : edge_grab_sample(edges, spec.xi, rng)) {
      if (rng.bernoulli(0.5)) std::swap(a, b);
      cx[l].push_back({a, b});
      cs.gate2(GateKind::CX, a, b);
    }
  }

  // Inverse half with a random Pauli frame compiled into each one-qubit layer.
  PauliFrame frame(N);
  for (int l = half - 1; l >= 0; --l) {
    for (auto [a, b] : cx[l]) {
      cs.gate2(GateKind::CX, a, b);
      frame.cx(a, b);
    }
    std::vector<Mat2> gates(N);
    for (int q = 0; q < N; ++q) {
      Frame r = random_pauli(rng);
      gates[q] = pauli_matrix(r) * layers[l][q].adjoint() * frame.matrix(q);
      frame.set(q, r);
    }
    layer_1q(gates);
  }
  std::string target(N, '0');
  std::vector<Mat2> last(N);
  for (int q = 0; q < N; ++q) {
    bool flip = rng.bernoulli(0.5);
    target[q] = flip ? '1' : '0';
    last[q] = (flip ? pauli_matrix(Frame::X) : Mat2::Identity()) * c0[q].adjoint() * frame.matrix(q);
  }
  layer_1q(last);
  for (int q = 0; q < N; ++q) cs.measure(q);
  auto circuit = schedule_asap(cs, timing);

  if (spec.flavor == MrbFlavor::Clifford) {
    for (auto& ins : circuit.instructions())
      if (ins.kind == GateKind::U && !is_clifford_instruction(ins))
        throw Error("internal: non-Clifford layer in Clifford MRB");
    if (clifford_target(circuit) != target) throw Error("internal: MRB frame tracking mismatch");
  }
  return {std::move(circuit), target};
}

std::vector<TargetedCircuit> mrb_training_set(int N, int layers, int count, MrbFlavor flavor, std::uint64_t seed,
                                              const std::vector<Edge>& edges, double xi,
                                              const GateTimingModel& timing) {
  if (count < 1) throw InvalidArgument("training set needs at least one circuit");
  std::vector<TargetedCircuit> out;
  for (int i = 0; i < count; ++i) {
    MRBSpec s;
    s.N = N;
    s.D = layers;
    s.xi = xi;
    s.flavor = flavor;
    s.edges = edges;
    s.seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    out.push_back(mrb_circuit(s, timing));
  }
  return out;
}

}  // namespace ddforge
