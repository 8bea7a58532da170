#include "ddforge/simulator.hpp"

#include "ddforge/errors.hpp"
#include "ddforge/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace ddforge {

using kernels::cplx;

int CountsDistribution::count(const std::string& bits) const {
  auto it = counts.find(bits);
  return it == counts.end() ? 0 : it->second;
}

nlohmann::json CountsDistribution::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : counts) j[k] = v;
  return j;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Node {
  double t;
  int cls;  // 0 start, 1 instruction, 2 step, 3 final
  int idx;  // instruction index, or qubit for start/step/final
  auto key() const { return std::make_tuple(t, cls, idx); }
};

bool has_transverse(const NoiseModel& noise, int q) {
  auto s = noise.sigma_of(q);
  auto m = noise.mean_of(q);
  return s[0] > 0 || s[1] > 0 || m[0] != 0 || m[1] != 0;
}

Mat2 physical_1q(const Instruction& ins, const NoiseModel& noise) {
  if (ins.kind == GateKind::Pulse)
    return pulse_unitary(ins.pulse, noise.flip_angle_error, noise.identity_as_2pi_pulse);
  std::span<const double> p(ins.params.data(), 3);
  Mat2 ideal = gate_matrix_1q(ins.kind, p);
  if (is_virtual(ins.kind) || ins.kind == GateKind::I || noise.flip_angle_error == 0.0) return ideal;
  return over_rotate(ideal, noise.flip_angle_error / kPi);
}

Mat2 field_rotation(const std::array<double, 3>& h, double dt) {
  const double norm = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  if (norm == 0.0 || dt == 0.0) return Mat2::Identity();
  const double theta = norm * dt;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2) / norm;
  Mat2 r;
  r << cplx(c, -s * h[2]), cplx(-s * h[1], -s * h[0]), cplx(s * h[1], -s * h[0]), cplx(c, s * h[2]);
  return r;
}

Mat4 kron_local(const Mat2& on_a, const Mat2& on_b) {
  Mat4 m;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int ja = 0; ja < 2; ++ja)
        for (int jb = 0; jb < 2; ++jb) m(ia + 2 * ib, ja + 2 * jb) = on_a(ia, ja) * on_b(ib, jb);
  return m;
}

const Mat2 kZ = (Mat2() << 1, 0, 0, -1).finished();

}  // namespace

CompiledCircuit compile_circuit(const ScheduledCircuit& circuit, const NoiseModel& noise, const SimOptions& options) {
  const int n = circuit.num_qubits();
  if (n > options.max_qubits)
    throw TooManyQubits(std::to_string(n) + " qubits exceeds the statevector limit of " +
                        std::to_string(options.max_qubits));
  if (n < 1) throw InvalidArgument("circuit has no qubits");
  if (!(options.max_step > 0)) throw InvalidArgument("max_step must be positive");
  noise.validate();
  circuit.validate();
  const auto& ins = circuit.instructions();

  CompiledCircuit cc;
  cc.num_qubits = n;
  cc.measured = circuit.measured_qubits();
  cc.noise = noise;

  // End of evolution per qubit.
  std::vector<double> meas_start(n, -1.0);
  double t_all = 0.0;
  for (const auto& i : ins) {
    if (i.kind == GateKind::Measure) {
      meas_start[i.qubits[0]] = i.t0;
      t_all = std::max(t_all, i.t0);
    } else {
      t_all = std::max(t_all, i.t1());
    }
  }
  {
    std::vector<bool> done(n, false);
    for (const auto& i : ins) {
      for (int k = 0; k < i.arity(); ++k) {
        const int q = i.qubits[k];
        if (done[q])
          throw InvalidArgument("operations after measurement on qubit " + std::to_string(q) + " are not supported");
      }
      if (i.kind == GateKind::Measure) done[i.qubits[0]] = true;
    }
  }
  std::vector<double> t_end(n);
  for (int q = 0; q < n; ++q) t_end[q] = meas_start[q] >= 0 ? meas_start[q] : t_all;

  // Per-qubit node sequences.
  std::vector<std::vector<Node>> per(n);
  for (int q = 0; q < n; ++q) per[q].push_back({0.0, 0, q});
  for (int k = 0; k < static_cast<int>(ins.size()); ++k) {
    const auto& i = ins[k];
    if (i.kind == GateKind::Measure) continue;
    if (i.arity() == 2) {
      per[i.qubits[0]].push_back({i.t0, 1, k});
      per[i.qubits[1]].push_back({i.t0, 1, k});
    } else {
      per[i.qubits[0]].push_back({i.t0 + 0.5 * i.dt, 1, k});
    }
  }
  auto span_start = [&](const Node& nd) {
    if (nd.cls == 1 && ins[nd.idx].arity() == 2) return ins[nd.idx].t1();
    return nd.t;
  };
  for (int q = 0; q < n; ++q) {
    auto& v = per[q];
    std::stable_sort(v.begin() + 1, v.end(), [](const Node& a, const Node& b) { return a.key() < b.key(); });
    v.push_back({t_end[q], 3, q});
    if (has_transverse(noise, q)) {
      std::vector<Node> refined;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        refined.push_back(v[i]);
        const double s0 = span_start(v[i]), s1 = v[i + 1].t;
        const int parts = static_cast<int>(std::ceil((s1 - s0) / options.max_step - 1e-9));
        for (int p = 1; p < parts; ++p) refined.push_back({s0 + (s1 - s0) * p / parts, 2, q});
      }
      refined.push_back(v.back());
      v = std::move(refined);
    }
  }

  // ZZ edges and their inactive windows (two-qubit gates on an endpoint).
  struct EdgeInfo {
    int a, b;
    double j;
    std::vector<std::pair<double, double>> off;
    double last = 0.0;
  };
  std::vector<EdgeInfo> edges;
  std::vector<std::vector<int>> touching(n);
  for (const auto& [e, j] : noise.zz) {
    if (j == 0.0) continue;
    if (e.first >= n || e.second >= n) continue;
    edges.push_back({e.first, e.second, j, {}, 0.0});
    touching[e.first].push_back(static_cast<int>(edges.size()) - 1);
    touching[e.second].push_back(static_cast<int>(edges.size()) - 1);
  }
  for (auto& e : edges) {
    for (const auto& i : ins)
      if (i.arity() == 2 && (i.acts_on(e.a) || i.acts_on(e.b))) e.off.emplace_back(i.t0, i.t1());
    std::sort(e.off.begin(), e.off.end());
    std::vector<std::pair<double, double>> merged;
    for (auto w : e.off) {
      if (!merged.empty() && w.first <= merged.back().second) merged.back().second = std::max(merged.back().second, w.second);
      else merged.push_back(w);
    }
    e.off = std::move(merged);
  }
  auto active_time = [](const EdgeInfo& e, double from, double to) {
    double t = to - from;
    for (auto [s, f] : e.off) {
      const double lo = std::max(s, from), hi = std::min(f, to);
      if (hi > lo) t -= hi - lo;
    }
    return std::max(0.0, t);
  };

  // Spans around every node; global ordering.
  struct Placed {
    Node node;
    int qubit;
    double pre, post, span;
  };
  std::vector<Placed> placed;
  for (int q = 0; q < n; ++q) {
    const auto& v = per[q];
    if (has_transverse(noise, q)) {
      // Strang splitting: each node applies R(after/2) G R(before/2).
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double before = i == 0 ? 0.0 : v[i].t - span_start(v[i - 1]);
        const double after = i + 1 < v.size() ? v[i + 1].t - span_start(v[i]) : 0.0;
        placed.push_back({v[i], q, std::max(0.0, before) / 2, std::max(0.0, after) / 2, std::max(0.0, before)});
      }
    } else {
      // Z-only fields commute with ZZ, so each gate node carries the whole
      // preceding span; rotations after the last gate are diagonal and
      // cannot change Z-basis outcomes.
      const std::size_t last = options.full_state ? v.size() : v.size() - 1;
      for (std::size_t i = 1; i < last; ++i) {
        const double before = v[i].t - span_start(v[i - 1]);
        placed.push_back({v[i], q, std::max(0.0, before), 0.0, std::max(0.0, before)});
      }
    }
  }
  std::stable_sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
    if (a.node.key() != b.node.key()) return a.node.key() < b.node.key();
    return a.qubit < b.qubit;
  });

  auto flush = [&](std::vector<int> qubits, double t, std::vector<std::pair<int, double>>& out) {
    std::vector<int> seen;
    for (int q : qubits)
      for (int ei : touching[q]) {
        if (std::find(seen.begin(), seen.end(), ei) != seen.end()) continue;
        seen.push_back(ei);
        auto& e = edges[ei];
        const double phi = e.j * active_time(e, e.last, t);
        e.last = t;
        if (phi != 0.0) out.emplace_back(ei, phi);
      }
  };

  for (std::size_t k = 0; k < placed.size(); ++k) {
    const auto& p = placed[k];
    const bool two = p.node.cls == 1 && ins[p.node.idx].arity() == 2;
    if (two) {
      const auto& i = ins[p.node.idx];
      if (p.qubit != i.qubits[0]) continue;  // emitted once, from the first qubit's node
      // find the partner node
      const Placed* partner = nullptr;
      for (std::size_t m = k + 1; m < placed.size() && !partner; ++m)
        if (placed[m].node.key() == p.node.key() && placed[m].qubit == i.qubits[1]) partner = &placed[m];
      for (std::size_t m = 0; m < k && !partner; ++m)
        if (placed[m].node.key() == p.node.key() && placed[m].qubit == i.qubits[1]) partner = &placed[m];
      CompiledCircuit::Op op;
      op.two_qubit = true;
      op.a = i.qubits[0];
      op.b = i.qubits[1];
      op.gate2 = gate_matrix_2q(i.kind);
      op.pre_a = p.pre;
      op.post_a = p.post;
      op.span_a = p.span;
      op.pre_b = partner->pre;
      op.post_b = partner->post;
      op.span_b = partner->span;
      std::vector<std::pair<int, double>> fl;
      flush({op.a, op.b}, p.node.t, fl);
      if (!fl.empty()) {
        for (auto [ei, phi] : fl)
          for (int q : {edges[ei].a, edges[ei].b})
            if (std::find(op.diag_bits.begin(), op.diag_bits.end(), q) == op.diag_bits.end()) op.diag_bits.push_back(q);
        const int nb = static_cast<int>(op.diag_bits.size());
        op.table.resize(std::size_t{1} << nb);
        for (int pat = 0; pat < (1 << nb); ++pat) {
          double angle = 0.0;
          for (auto [ei, phi] : fl) {
            const int ka = static_cast<int>(std::find(op.diag_bits.begin(), op.diag_bits.end(), edges[ei].a) - op.diag_bits.begin());
            const int kb = static_cast<int>(std::find(op.diag_bits.begin(), op.diag_bits.end(), edges[ei].b) - op.diag_bits.begin());
            const int s = (((pat >> ka) ^ (pat >> kb)) & 1) ? -1 : 1;
            angle += phi / 4 * s;
          }
          op.table[pat] = std::polar(1.0, -angle);
        }
      }
      cc.ops.push_back(std::move(op));
      continue;
    }
    const int q = p.qubit;
    CompiledCircuit::Op op;
    op.a = q;
    op.pre_a = p.pre;
    op.post_a = p.post;
    op.span_a = p.span;
    op.final_node = p.node.cls == 3;
    op.gate1 = p.node.cls == 1 ? physical_1q(ins[p.node.idx], noise) : Mat2::Identity();
    std::vector<std::pair<int, double>> fl;
    flush({q}, p.node.t, fl);
    if (!fl.empty()) {
      const int nb = static_cast<int>(fl.size());
      for (auto [ei, phi] : fl) op.diag_bits.push_back(edges[ei].a == q ? edges[ei].b : edges[ei].a);
      op.phase0.resize(std::size_t{1} << nb);
      op.phase1.resize(std::size_t{1} << nb);
      for (int pat = 0; pat < (1 << nb); ++pat) {
        double angle = 0.0;
        for (int k2 = 0; k2 < nb; ++k2) angle += fl[k2].second / 4 * (((pat >> k2) & 1) ? -1 : 1);
        op.phase0[pat] = std::polar(1.0, -angle);
        op.phase1[pat] = std::conj(op.phase0[pat]);
      }
    }
    cc.ops.push_back(std::move(op));
  }
  return cc;
}

FieldRealization sample_fields(const NoiseModel& noise, int num_qubits, Rng& rng) {
  FieldRealization f;
  f.h.resize(num_qubits);
  for (int q = 0; q < num_qubits; ++q) {
    const auto s = noise.sigma_of(q);
    const auto m = noise.mean_of(q);
    for (int a = 0; a < 3; ++a) f.h[q][a] = m[a] + (s[a] > 0 ? s[a] * rng.normal() : 0.0);
  }
  return f;
}

std::vector<cplx> evolve(const CompiledCircuit& cc, const FieldRealization& fields, Rng* dephasing_rng,
                         bool parallel_kernels) {
  const int n = cc.num_qubits;
  std::vector<cplx> psi(std::size_t{1} << n, cplx(0.0, 0.0));
  psi[0] = 1.0;
  auto h_of = [&](int q) { return q < static_cast<int>(fields.h.size()) ? fields.h[q] : std::array<double, 3>{}; };
  auto flip = [&](int q, double span) -> bool {
    const double rate = cc.noise.dephasing_of(q);
    if (rate <= 0.0 || !dephasing_rng || span <= 0.0) return false;
    return dephasing_rng->bernoulli(1.0 - std::exp(-rate * span));
  };
  auto one = parallel_kernels ? &kernels::omp::apply_1q : &kernels::serial::apply_1q;
  auto one_diag = parallel_kernels ? &kernels::omp::apply_1q_diag : &kernels::serial::apply_1q_diag;
  auto two = parallel_kernels ? &kernels::omp::apply_2q : &kernels::serial::apply_2q;
  auto diag = parallel_kernels ? &kernels::omp::apply_diag : &kernels::serial::apply_diag;

  for (const auto& op : cc.ops) {
    if (!op.two_qubit) {
      const auto h = h_of(op.a);
      Mat2 pre = field_rotation(h, op.pre_a);
      if (flip(op.a, op.span_a)) pre = kZ * pre;
      const Mat2 m = field_rotation(h, op.post_a) * op.gate1 * pre;
      if (op.phase0.empty()) {
        one(psi.data(), n, op.a, m);
      } else {
        kernels::PairDiagonal d{op.diag_bits.data(), static_cast<int>(op.diag_bits.size()), op.phase0.data(),
                                op.phase1.data()};
        one_diag(psi.data(), n, op.a, m, d);
      }
    } else {
      if (!op.table.empty()) diag(psi.data(), n, op.diag_bits.data(), static_cast<int>(op.diag_bits.size()), op.table.data());
      const auto ha = h_of(op.a), hb = h_of(op.b);
      Mat2 pa = field_rotation(ha, op.pre_a), pb = field_rotation(hb, op.pre_b);
      if (flip(op.a, op.span_a)) pa = kZ * pa;
      if (flip(op.b, op.span_b)) pb = kZ * pb;
      const Mat4 m = kron_local(field_rotation(ha, op.post_a), field_rotation(hb, op.post_b)) * op.gate2 *
                     kron_local(pa, pb);
      two(psi.data(), n, op.a, op.b, m);
    }
  }
  return psi;
}

namespace {

std::vector<double> measured_distribution(const std::vector<cplx>& psi, int n, const std::vector<int>& measured,
                                          bool parallel_kernels) {
  std::vector<double> probs(std::size_t{1} << measured.size());
  if (parallel_kernels)
    kernels::omp::marginal_probabilities(psi.data(), n, measured.data(), static_cast<int>(measured.size()), probs.data());
  else
    kernels::serial::marginal_probabilities(psi.data(), n, measured.data(), static_cast<int>(measured.size()), probs.data());
  return probs;
}

}  // namespace

CountsDistribution simulate_counts(const ScheduledCircuit& circuit, const NoiseModel& noise, int shots,
                                   std::uint64_t seed, const SimOptions& options) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  const CompiledCircuit cc = compile_circuit(circuit, noise, options);
  const int n = cc.num_qubits;
  const int m = static_cast<int>(cc.measured.size());
  if (m > 30) throw TooManyQubits("too many measured qubits");
  int traj = 1;
  if (noise.is_stochastic()) traj = (options.trajectories <= 0 || options.trajectories > shots) ? shots : options.trajectories;
  const bool outer_parallel = traj > 1;

  std::vector<double> readout(m);
  for (int k = 0; k < m; ++k) readout[k] = noise.readout_of(cc.measured[k]);

  std::vector<std::vector<std::uint32_t>> outcomes(traj);
#pragma omp parallel for schedule(dynamic) if (outer_parallel)
  for (int t = 0; t < traj; ++t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    const FieldRealization fields = sample_fields(noise, n, rng);
    const auto psi = evolve(cc, fields, &rng, !outer_parallel);
    auto probs = measured_distribution(psi, n, cc.measured, !outer_parallel);
    for (std::size_t k = 1; k < probs.size(); ++k) probs[k] += probs[k - 1];
    const double total = probs.back();
    const int my_shots = shots / traj + (t < shots % traj ? 1 : 0);
    auto& out = outcomes[t];
    out.reserve(my_shots);
    for (int s = 0; s < my_shots; ++s) {
      const double u = rng.uniform() * total;
      auto idx = static_cast<std::uint32_t>(std::upper_bound(probs.begin(), probs.end(), u) - probs.begin());
      if (idx >= probs.size()) idx = static_cast<std::uint32_t>(probs.size() - 1);
      for (int k = 0; k < m; ++k)
        if (readout[k] > 0 && rng.bernoulli(readout[k])) idx ^= 1u << k;
      out.push_back(idx);
    }
  }
  std::map<std::uint32_t, int> tally;
  for (const auto& v : outcomes)
    for (auto x : v) ++tally[x];
  CountsDistribution cd;
  cd.shots = shots;
  cd.num_bits = m;
  for (auto [x, c] : tally) cd.counts[format_bits(x, m)] += c;
  return cd;
}

std::vector<cplx> ideal_statevector(const ScheduledCircuit& circuit, int max_qubits) {
  SimOptions o;
  o.max_qubits = max_qubits;
  const auto cc = compile_circuit(circuit, NoiseModel{}, o);
  return evolve(cc, FieldRealization{}, nullptr, true);
}

ProbabilityMap simulate_ideal(const ScheduledCircuit& circuit, int max_qubits) {
  if (circuit.num_qubits() > max_qubits) {
    if (!is_clifford_circuit(circuit))
      throw TooManyQubits("non-Clifford circuit above the statevector limit");
    return clifford_distribution(circuit);
  }
  const auto psi = ideal_statevector(circuit, max_qubits);
  const auto measured = circuit.measured_qubits();
  const auto probs = measured_distribution(psi, circuit.num_qubits(), measured, true);
  ProbabilityMap out;
  for (std::size_t x = 0; x < probs.size(); ++x)
    if (probs[x] > 1e-12) out[format_bits(x, static_cast<int>(measured.size()))] = probs[x];
  return out;
}

std::string target_bitstring(const ScheduledCircuit& circuit) { return clifford_target(circuit); }

}  // namespace ddforge
