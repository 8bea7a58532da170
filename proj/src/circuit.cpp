#include "ddforge/circuit.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>
#include <map>

namespace ddforge {

void GateTimingModel::validate() const {
  if (!(one_qubit > 0 && two_qubit > 0 && pulse > 0 && measurement > 0))
    throw ConfigError("gate durations must be strictly positive");
}

double GateTimingModel::duration(GateKind kind) const {
  if (is_virtual(kind)) return 0.0;
  if (kind == GateKind::Pulse) return pulse;
  if (kind == GateKind::Measure) return measurement;
  return gate_arity(kind) == 2 ? two_qubit : one_qubit;
}

void ScheduledCircuit::add(const Instruction& ins) {
  auto it = std::upper_bound(instructions_.begin(), instructions_.end(), ins.t0,
                             [](double t, const Instruction& x) { return t < x.t0; });
  instructions_.insert(it, ins);
}

void ScheduledCircuit::add_all(const std::vector<Instruction>& ins) {
  instructions_.insert(instructions_.end(), ins.begin(), ins.end());
  std::stable_sort(instructions_.begin(), instructions_.end(),
                   [](const Instruction& a, const Instruction& b) { return a.t0 < b.t0; });
}

void ScheduledCircuit::set_instructions(std::vector<Instruction> ins) {
  instructions_.clear();
  add_all(ins);
}

double ScheduledCircuit::duration() const {
  double d = 0.0;
  for (const auto& i : instructions_) d = std::max(d, i.t1());
  return d;
}

std::vector<int> ScheduledCircuit::measured_qubits() const {
  std::map<int, int> by_clbit;
  for (const auto& i : instructions_)
    if (i.kind == GateKind::Measure) by_clbit[i.clbit] = i.qubits[0];
  std::vector<int> out;
  for (auto [c, q] : by_clbit) out.push_back(q);
  return out;
}

int ScheduledCircuit::num_measured() const { return count(GateKind::Measure); }

int ScheduledCircuit::count(GateKind kind) const {
  return static_cast<int>(std::count_if(instructions_.begin(), instructions_.end(),
                                        [&](const Instruction& i) { return i.kind == kind; }));
}

void ScheduledCircuit::validate() const {
  std::vector<double> busy_until(num_qubits_, 0.0);
  std::vector<int> clbits;
  for (const auto& ins : instructions_) {
    if (ins.t0 < 0 || ins.dt < 0) throw InvalidArgument("negative instruction time");
    for (int k = 0; k < ins.arity(); ++k) {
      int q = ins.qubits[k];
      if (q < 0 || q >= num_qubits_) throw InvalidArgument("instruction qubit out of range");
      if (ins.t0 < busy_until[q] - 1e-9)
        throw InvalidArgument("overlapping instructions on qubit " + std::to_string(q) + " at t=" +
                              std::to_string(ins.t0));
      busy_until[q] = ins.t1();
    }
    if (ins.kind == GateKind::Measure) clbits.push_back(ins.clbit);
  }
  std::sort(clbits.begin(), clbits.end());
  for (std::size_t i = 0; i < clbits.size(); ++i)
    if (clbits[i] != static_cast<int>(i)) throw InvalidArgument("clbits must be 0..m-1");
}

nlohmann::json ScheduledCircuit::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : edges_) edges.push_back({a, b});
  nlohmann::json list = nlohmann::json::array();
  for (const auto& i : instructions_) {
    nlohmann::json q = nlohmann::json::array({i.qubits[0]});
    if (i.qubits[1] >= 0) q.push_back(i.qubits[1]);
    nlohmann::json params = nlohmann::json::array();
    for (int k = 0; k < gate_param_count(i.kind); ++k) params.push_back(i.params[k]);
    nlohmann::json e = {{"gate", gate_name(i.kind)}, {"qubits", q}, {"t0", i.t0}, {"dt", i.dt}, {"params", params}};
    if (i.kind == GateKind::Pulse) e["pulse"] = to_string(i.pulse);
    if (i.kind == GateKind::Measure) e["clbit"] = i.clbit;
    list.push_back(std::move(e));
  }
  return {{"qubits", num_qubits_}, {"edges", edges}, {"instructions", list}};
}

ScheduledCircuit ScheduledCircuit::from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  ScheduledCircuit c(j.at("qubits").get<int>(), edges);
  std::vector<Instruction> list;
  for (const auto& e : j.at("instructions")) {
    Instruction ins;
    auto kind = parse_gate_name(e.at("gate").get<std::string>());
    if (!kind) throw UnsupportedGate("unknown gate '" + e.at("gate").get<std::string>() + "'");
    ins.kind = *kind;
    const auto& q = e.at("qubits");
    ins.qubits[0] = q.at(0).get<int>();
    if (q.size() > 1) ins.qubits[1] = q.at(1).get<int>();
    ins.t0 = e.at("t0").get<double>();
    ins.dt = e.at("dt").get<double>();
    const auto& p = e.at("params");
    for (std::size_t k = 0; k < p.size() && k < 3; ++k) ins.params[k] = p[k].get<double>();
    if (ins.kind == GateKind::Pulse) ins.pulse = parse_label(e.at("pulse").get<std::string>());
    if (ins.kind == GateKind::Measure) ins.clbit = e.at("clbit").get<int>();
    list.push_back(ins);
  }
  c.set_instructions(std::move(list));
  c.validate();
  return c;
}

std::string format_bits(std::uint64_t bits, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> i) & 1) s[i] = '1';
  return s;
}

}  // namespace ddforge
