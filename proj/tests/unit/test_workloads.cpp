#include "doctest.h"

#include "ddforge/errors.hpp"
#include "ddforge/scheduler.hpp"
#include "ddforge/simulator.hpp"
#include "ddforge/stabilizer.hpp"
#include "ddforge/workloads.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace ddforge;

namespace {

constexpr double kPi = std::numbers::pi;

double ideal_prob(const ScheduledCircuit& c, const std::string& bits) {
  auto p = simulate_ideal(c);
  auto it = p.find(bits);
  return it == p.end() ? 0.0 : it->second;
}

ScheduledCircuit random_clifford_motif(int n, int gates, Rng& rng) {
  CircuitSpec spec;
  spec.num_qubits = n;
  spec.coupling = Topology::all_to_all(n).edges();
  const GateKind one[] = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::SX, GateKind::Z};
  for (int g = 0; g < gates; ++g) {
    if (rng.bernoulli(0.3)) {
      int a = int(rng.below(n)), b = int(rng.below(n - 1));
      if (b >= a) ++b;
      spec.gate2(GateKind::CX, a, b);
    } else {
      spec.gate(one[rng.below(6)], int(rng.below(n)));
    }
  }
  return schedule_asap(spec, {});
}

}  // namespace

TEST_SUITE("workloads") {
  TEST_CASE("Bernstein-Vazirani") {
    auto one = bv_circuit(1, Topology::linear(2));
    CHECK(one.target == "1");
    CHECK(one.circuit.count(GateKind::CX) == 1);
    CHECK(ideal_prob(one.circuit, "1") == doctest::Approx(1.0));
    auto four = bv_circuit(4, Topology::all_to_all(5));
    CHECK(four.target == "1111");
    CHECK(ideal_prob(four.circuit, "1111") == doctest::Approx(1.0).epsilon(1e-12));
    auto nine = bv_circuit(9, Topology::linear(10));
    CHECK(ideal_prob(nine.circuit, std::string(9, '1')) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nine.circuit.num_measured() == 9);
    auto gaps = find_idle_gaps(nine.circuit, 8 * 50.0);
    std::set<int> idle_qubits;
    for (const auto& g : gaps) idle_qubits.insert(g.qubit);
    CHECK(idle_qubits.count(0));
    CHECK(idle_qubits.count(1));
    CHECK(gaps.size() >= 8);
    CHECK_THROWS_AS(bv_circuit(9, Topology::linear(9)), TopologyTooSmall);
    auto hh = Topology::heavy_hex_fragment(10);
    if (!hh.has_edge(0, 1) || !hh.has_edge(8, 9)) {
      bool path = true;
      for (int i = 0; i < 9; ++i) path = path && hh.has_edge(i, i + 1);
      if (!path) CHECK_THROWS_AS(bv_circuit(9, hh), TopologyTooSmall);
    }
  }

  TEST_CASE("GHZ") {
    auto bell = ghz_circuit(2, Topology::linear(2));
    CHECK(bell.ideal.at("00") == 0.5);
    auto p = simulate_ideal(bell.circuit);
    CHECK(p.at("00") == doctest::Approx(0.5));
    CHECK(p.at("11") == doctest::Approx(0.5));
    auto three = ghz_circuit(3, Topology::linear(3));
    auto p3 = simulate_ideal(three.circuit);
    CHECK(p3.size() == 2);
    CHECK(p3.at("111") == doctest::Approx(0.5));
    auto eight = ghz_circuit(8, Topology::linear(8));
    NoiseModel zero;
    auto counts = simulate_counts(eight.circuit, zero, 10000, 3);
    CHECK(counts.counts.size() == 2);
    double f = counts.count("00000000") / 10000.0;
    CHECK(std::abs(f - 0.5) < 5 * std::sqrt(0.25 / 10000));
    auto hh = ghz_circuit(10, Topology::heavy_hex_fragment(10));
    CHECK(simulate_ideal(hh.circuit).at(std::string(10, '1')) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ghz_circuit(3, Topology(3, {{0, 1}})), TopologyDisconnected);
  }

  TEST_CASE("Grover") {
    CHECK(grover_default_iterations(5) == 4);
    CHECK(grover_success_probability(2, 1) == doctest::Approx(1.0));
    CHECK(grover_success_probability(5, 4) == doctest::Approx(0.9992).epsilon(1e-4));
    Rng rng(8);
    for (int n = 1; n <= 5; ++n)
      for (int t = 1; t <= 6; ++t) {
        std::string bits(n, '0');
        for (auto& b : bits) b = rng.bernoulli(0.5) ? '1' : '0';
        auto c = grover_circuit(n, bits, t);
        CHECK(std::abs(ideal_prob(c, bits) - grover_success_probability(n, t)) < 1e-9);
      }
    auto a = grover_circuit(5, "00000", 1);
    auto b = grover_circuit(5, "11111", 1);
    REQUIRE(a.instructions().size() == b.instructions().size());
    int differ = 0;
    for (std::size_t i = 0; i < a.instructions().size(); ++i) {
      const auto& x = a.instructions()[i];
      const auto& y = b.instructions()[i];
      CHECK(x.kind == y.kind);
      CHECK(x.t0 == y.t0);
      CHECK(x.qubits == y.qubits);
      if (x.params != y.params) {
        CHECK(x.kind == GateKind::RZ);
        ++differ;
      }
    }
    CHECK(differ > 0);
    CHECK(a.count(GateKind::CX) == 2 * 30);
  }

  TEST_CASE("Cliffordization") {
    Rng rng(9);
    int zero = 0, three = 0;
    for (int i = 0; i < 10000; ++i) {
      double r = round_phase(-kPi / 4, rng);
      zero += std::abs(r) < 1e-12;
      three += std::abs(r - 3 * kPi / 2) < 1e-12;
    }
    CHECK(zero + three == 10000);
    CHECK(std::abs(zero - 5000) < 3 * 50);
    for (int i = 0; i < 100; ++i) CHECK(round_phase(kPi / 2, rng) == doctest::Approx(kPi / 2));
    double mean = 0;
    for (int i = 0; i < 10000; ++i) mean += round_phase(kPi / 4, rng);
    mean /= 10000;
    CHECK(std::abs(mean - kPi / 4) < 3 * (kPi / 4) / 100);

    auto g = grover_circuit(5, "10110", 1);
    auto c = cliffordize(g, rng);
    CHECK(is_clifford_circuit(c));
    REQUIRE(c.instructions().size() == g.instructions().size());
    for (std::size_t i = 0; i < c.instructions().size(); ++i) {
      CHECK(c.instructions()[i].t0 == g.instructions()[i].t0);
      CHECK(c.instructions()[i].dt == g.instructions()[i].dt);
    }
    CircuitSpec s;
    s.num_qubits = 1;
    s.gate(GateKind::RX, 0, {0.3}).gate(GateKind::T, 0).gate(GateKind::U, 0, {0.1, 0.2, 0.3}).measure(0);
    auto sc = schedule_asap(s, {});
    auto cc = cliffordize(sc, rng);
    CHECK(is_clifford_circuit(cc));
    CHECK(cc.duration() == sc.duration());
  }

  TEST_CASE("mirror circuits") {
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
      ScheduledCircuit empty(3, {});
      auto m = mirror_circuit(empty, rng);
      std::string support;
      for (const auto& i : m.circuit.instructions())
        if (i.kind != GateKind::Measure)
          support += (i.kind == GateKind::X || i.kind == GateKind::Y) ? '1' : '0';
      CHECK(support == m.target);
    }
    CircuitSpec h;
    h.num_qubits = 1;
    h.gate(GateKind::H, 0);
    for (int t = 0; t < 20; ++t) {
      auto m = mirror_circuit(schedule_asap(h, {}), rng);
      // H P H maps X <-> Z: only a Z or Y centre flips the output
      Instruction centre = m.circuit.instructions()[1];
      bool flips = centre.kind == GateKind::Z || centre.kind == GateKind::Y;
      CHECK(m.target == (flips ? "1" : "0"));
    }
    for (int t = 0; t < 10; ++t) {
      auto motif = random_clifford_motif(4, 20, rng);
      auto m = mirror_circuit(motif, rng);
      int gates = 0;
      for (const auto& i : m.circuit.instructions()) gates += i.kind != GateKind::Measure;
      CHECK(gates == 2 * int(motif.instructions().size()) + 4);
      auto counts = simulate_counts(m.circuit, NoiseModel{}, 200, t);
      CHECK(counts.count(m.target) == 200);
      m.circuit.validate();
      // idle timing mirrored about the centre layer
      CHECK(m.circuit.duration() == doctest::Approx(2 * motif.duration() + 50 + 700));
    }
    ScheduledCircuit measured(1, {});
    Instruction meas;
    meas.kind = GateKind::Measure;
    meas.qubits = {0, -1};
    meas.dt = 700;
    meas.clbit = 0;
    measured.add(meas);
    CHECK_THROWS_AS(mirror_circuit(measured, rng), NonInvertibleGate);
    for (auto k : {GateKind::S, GateKind::T, GateKind::SX, GateKind::RX, GateKind::U}) {
      Instruction i;
      i.kind = k;
      i.qubits = {0, -1};
      i.params = {0.3, 0.7, -1.1};
      auto inv = inverse_instruction(i);
      Mat2 prod = gate_matrix_1q(inv.kind, inv.params) * gate_matrix_1q(k, i.params);
      CHECK(equal_up_to_phase(prod, Mat2::Identity(), 1e-9));
    }
  }

  TEST_CASE("edge grab sampler") {
    Rng rng(11);
    auto line = Topology::linear(10).edges();
    for (int i = 0; i < 100; ++i) CHECK(edge_grab_sample(line, 0.0, rng).empty());
    for (int t = 0; t < 2000; ++t) {
      int n = 2 + int(rng.below(10));
      std::vector<Edge> edges;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (rng.bernoulli(0.4)) edges.push_back({a, b});
      auto m = edge_grab_sample(edges, rng.uniform(), rng);
      std::set<int> used;
      for (auto [a, b] : m) {
        CHECK(used.insert(a).second);
        CHECK(used.insert(b).second);
      }
    }
    double occupied = 0;
    for (int i = 0; i < 10000; ++i) occupied += 2.0 * edge_grab_sample(line, 0.25, rng).size() / 10;
    CHECK(std::abs(occupied / 10000 - 0.25) < 0.05);
  }

  TEST_CASE("mirror randomized benchmarking") {
    CHECK(clifford_1q_angles().size() == 24);
    MRBSpec s;
    s.N = 6;
    s.D = 6;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      s.seed = seed;
      auto c = mrb_circuit(s);
      CHECK(ideal_prob(c.circuit, c.target) == doctest::Approx(1.0).epsilon(1e-9));
    }
    s.D = 0;
    auto z = mrb_circuit(s);
    CHECK(ideal_prob(z.circuit, z.target) == doctest::Approx(1.0).epsilon(1e-9));
    s.N = 4;
    s.D = 4;
    s.flavor = MrbFlavor::Su2;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      s.seed = seed;
      auto c = mrb_circuit(s);
      CHECK(ideal_prob(c.circuit, c.target) == doctest::Approx(1.0).epsilon(1e-9));
    }
    s.D = 3;
    CHECK_THROWS_AS(mrb_circuit(s), ConfigError);
    auto a = mrb_training_set(10, 6, 5, MrbFlavor::Clifford, 42);
    auto b = mrb_training_set(10, 6, 5, MrbFlavor::Clifford, 42);
    REQUIRE(a.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(a[i].circuit.to_json() == b[i].circuit.to_json());
      CHECK(a[i].target == b[i].target);
    }
    CHECK(mrb_training_set(4, 2, 1, MrbFlavor::Clifford, 1).size() == 1);
  }
}
