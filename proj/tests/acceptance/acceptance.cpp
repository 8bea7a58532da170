// Acceptance runner: one PASS/FAIL line per criterion.
#include "ddforge/config.hpp"
#include "ddforge/errors.hpp"
#include "ddforge/experiments.hpp"
#include "ddforge/ga.hpp"
#include "ddforge/metrics.hpp"
#include "ddforge/pauli.hpp"
#include "ddforge/scheduler.hpp"
#include "ddforge/simulator.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

using namespace ddforge;
namespace fs = std::filesystem;
using C = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_out = "acceptance_out";

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

ExperimentConfig config_for(const std::string& name, const std::string& out) {
  auto c = load_config(fs::path(DDFORGE_CONFIG_DIR) / name);
  c.out_dir = (g_out / out).string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Group algebra

Mat2 raw_pauli(Frame f) {
  Mat2 m;
  switch (f) {
    case Frame::X: m << 0, 1, 1, 0; break;
    case Frame::Y: m << 0, C(0, -1), C(0, 1), 0; break;
    case Frame::Z: m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1;
  }
  return m;
}

std::optional<Frame> identify(const Mat2& m) {
  for (Frame f : {Frame::I, Frame::X, Frame::Y, Frame::Z}) {
    C overlap = (raw_pauli(f).adjoint() * m).trace() / 2.0;
    if (std::abs(std::abs(overlap) - 1.0) < 1e-12) return f;
  }
  return std::nullopt;
}

Outcome criterion1() {
  int agree = 0;
  for (auto a : kDecouplingGroup)
    for (auto b : kDecouplingGroup) {
      std::vector<PulseLabel> pair{a, b};
      auto want = identify(raw_pauli(a.axis()) * raw_pauli(b.axis()));
      if (want && frame_product(pair) == *want) ++agree;
    }
  std::vector<Frame> p1{Frame::X};
  std::vector<Frame> p3{Frame::X, Frame::Z, Frame::Y};
  auto cpmg = pulses_from_group_path(p1);
  auto xy4 = pulses_from_group_path(p3);
  bool cpmg_ok = cpmg == std::vector<Frame>{Frame::X, Frame::X};
  bool xy4_ok = xy4 == std::vector<Frame>{Frame::X, Frame::Y, Frame::X, Frame::Y};
  return {agree == 64 && cpmg_ok && xy4_ok, std::to_string(agree) + "/64 pairs, CPMG path " + (cpmg_ok ? "ok" : "wrong") +
                                                ", XY4 path " + (xy4_ok ? "ok" : "wrong")};
}

// ---------------------------------------------------------------------------
// 2. GA closure and composition with a stub backend

Outcome criterion2() {
  GAConfig cfg;
  cfg.K = 16;
  cfg.L = 8;
  cfg.iterations = 20;
  cfg.seed = 2024;
  long evaluated = 0, bad = 0;
  StrategyEvaluator stub = [&](const std::vector<DDStrategy>& batch, std::uint64_t seed) {
    std::vector<double> u;
    for (const auto& s : batch) {
      ++evaluated;
      for (const auto& seq : s.sequences)
        if (frame_product(seq.pulses()) != Frame::I || seq.length() != 8) ++bad;
      if (s.num_colors() != 3) ++bad;
      Rng rng(derive_seed(seed, {fnv1a(s.key())}));
      u.push_back(rng.uniform());
    }
    return u;
  };
  int bad_composition = 0, bad_size = 0, generations = 0;
  RunHooks hooks;
  hooks.on_iteration = [&](const IterationRecord& r, const Checkpoint& cp) {
    ++generations;
    if (r.iteration > 0 &&
        (r.parent_survivors.size() != 4 || r.offspring_survivors.size() != 12 || r.utilities.size() != 48))
      ++bad_composition;
    if (cp.population.size() != 16 || r.survivor_utilities.size() != 16) ++bad_size;
    for (const auto& s : cp.population.strategies)
      for (const auto& seq : s.sequences)
        if (frame_product(seq.pulses()) != Frame::I) ++bad;
  };
  auto res = run_gadd(stub, 3, cfg, hooks);
  bool ok = bad == 0 && bad_composition == 0 && bad_size == 0 && res.population.size() == 16 && generations == 21;
  return {ok, std::to_string(evaluated) + " strategies evaluated, " + std::to_string(bad) + " closure violations, " +
                  std::to_string(bad_composition) + " composition violations, " + std::to_string(bad_size) +
                  " size violations"};
}

// ---------------------------------------------------------------------------
// 3. Formula checks

Outcome criterion3() {
  std::vector<std::string> failed;
  CountsDistribution c;
  c.counts = {{"00", 9600}, {"11", 400}};
  c.shots = 10000;
  c.num_bits = 2;
  if (std::abs(success_probability(c, "11").value - 0.04) > 1e-12) failed.push_back("success");
  if (std::abs(one_norm_similarity({{"000", 0.5}, {"111", 0.5}}, {{"000", 1.0}}) - 0.5) > 1e-12)
    failed.push_back("one-norm");
  CountsDistribution perfect;
  perfect.counts = {{"0110", 1000}};
  perfect.shots = 1000;
  perfect.num_bits = 4;
  if (std::abs(polarization(perfect, "0110", 4) - 1.0) > 1e-12) failed.push_back("S perfect");
  if (std::abs(polarization_from_histogram({0.5, 0.5}, 1)) > 1e-12) failed.push_back("S uniform");
  if (std::abs(epl_from_p(0.9, 1) - 0.05) > 1e-12) failed.push_back("EPL");
  double worst = 0.0;
  for (double p : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    std::vector<DecayPoint> pts;
    for (int D : {2, 4, 8, 16}) pts.push_back({D, 0.8 * std::pow(p, D), 0.01});
    worst = std::max(worst, std::abs(fit_epl(pts, 3).p - p));
  }
  if (worst > 1e-3) failed.push_back("fit");
  std::string d = failed.empty() ? "all exact" : "failed:";
  for (auto& f : failed) d += " " + f;
  return {failed.empty(), d + ", worst fit error " + num(worst, 7)};
}

// ---------------------------------------------------------------------------
// 4. Exploration

Outcome criterion4() {
  ExplorationConfig cfg;
  cfg.trials = 25;
  cfg.L = 8;
  cfg.iterations = 7;
  cfg.seed = 1;
  auto rows = simulate_exploration(cfg);
  std::map<double, double> uni, rnd;
  for (const auto& r : rows) (r.init == ExplorationInit::Uniform ? uni : rnd)[r.mutation_prob] = r.mean_unique.back();
  bool every = true;
  for (auto& [p, u] : uni) every = every && u >= rnd[p];
  double g1 = uni[0.1] - rnd[0.1], g9 = uni[0.9] - rnd[0.9];
  return {every && g1 > g9, std::string("uniform >= random at every prob: ") + (every ? "yes" : "no") +
                                ", gap(0.1) " + num(g1, 2) + " vs gap(0.9) " + num(g9, 2)};
}

// ---------------------------------------------------------------------------
// 5. DD physics oracles

CircuitSpec random_spec(Rng& rng, int n, int depth) {
  CircuitSpec spec;
  spec.num_qubits = n;
  for (int i = 0; i + 1 < n; ++i) spec.coupling.emplace_back(i, i + 1);
  const GateKind ones[] = {GateKind::H, GateKind::X, GateKind::S, GateKind::T, GateKind::SX, GateKind::RZ};
  for (int d = 0; d < depth; ++d) {
    if (rng.bernoulli(0.4)) {
      int a = static_cast<int>(rng.below(n - 1));
      spec.gate2(GateKind::CX, a, a + 1);
    } else {
      spec.gate(ones[rng.below(6)], static_cast<int>(rng.below(n)), {rng.uniform() * 6, 0, 0});
    }
  }
  for (int q = 0; q < n; ++q) spec.measure(q);
  return spec;
}

bool transparency() {
  Rng rng(55);
  GateTimingModel timing;
  for (int t = 0; t < 10; ++t) {
    auto spec = random_spec(rng, 5, 40);
    auto c = schedule_asap(spec, timing);
    auto col = color_graph(spec.coupling, 5, 3);
    auto strat = uniform_initial_population(16, 8, 90 + t, col.num_colors).strategies[t];
    auto with = insert_dd(c, strat, col, timing).circuit;
    if (with.count(GateKind::Pulse) == 0) return false;
    auto pa = simulate_ideal(c), pb = simulate_ideal(with);
    if (pa.size() != pb.size()) return false;
    for (auto& [k, v] : pa)
      if (!pb.count(k) || std::abs(pb[k] - v) > 1e-12) return false;
    if (simulate_counts(c, NoiseModel{}, 2000, t).counts != simulate_counts(with, NoiseModel{}, 2000, t).counts)
      return false;
  }
  return true;
}

// One qubit: prep, an idle window of length T, unprep, measure. The prep
// gates are kept short so the unprotected field exposure is negligible.
ScheduledCircuit echo_circuit(GateKind prep, GateKind unprep, double T) {
  const double edge = 2.0;
  ScheduledCircuit c(1, {});
  Instruction a;
  a.kind = prep;
  a.qubits = {0, -1};
  a.t0 = 0;
  a.dt = edge;
  c.add(a);
  Instruction b = a;
  b.kind = unprep;
  b.t0 = edge + T;
  c.add(b);
  Instruction m;
  m.kind = GateKind::Measure;
  m.qubits = {0, -1};
  m.t0 = 2 * edge + T;
  m.dt = 700;
  m.clbit = 0;
  c.add(m);
  return c;
}

// Closed form: gates act at their midpoints, the static field rotates the
// qubit by |h| t about h between them, from t = 0 to the measurement.
double oracle_return_probability(const ScheduledCircuit& c, const std::array<double, 3>& h) {
  const double mag = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  auto field = [&](double t) -> Mat2 {
    Mat2 n = (h[0] * raw_pauli(Frame::X) + h[1] * raw_pauli(Frame::Y) + h[2] * raw_pauli(Frame::Z)) / mag;
    return std::cos(mag * t / 2) * Mat2::Identity() - C(0, 1) * std::sin(mag * t / 2) * n;
  };
  Eigen::Vector2cd psi(1, 0);
  double now = 0.0, end = 0.0;
  for (const auto& ins : c.instructions()) {
    if (ins.kind == GateKind::Measure) {
      end = ins.t0;
      continue;
    }
    const double mid = ins.t0 + ins.dt / 2;
    Mat2 g;
    if (ins.kind == GateKind::Pulse)
      g = -C(0, 1) * raw_pauli(ins.pulse.axis());
    else if (ins.kind == GateKind::H)
      g = (raw_pauli(Frame::X) + raw_pauli(Frame::Z)) / std::sqrt(2.0);
    else if (ins.kind == GateKind::SX)
      g << C(0.5, 0.5), C(0.5, -0.5), C(0.5, -0.5), C(0.5, 0.5);
    else if (ins.kind == GateKind::SXdg)
      g << C(0.5, -0.5), C(0.5, 0.5), C(0.5, 0.5), C(0.5, -0.5);
    else
      g = Mat2::Identity();
    psi = g * field(mid - now) * psi;
    now = mid;
  }
  psi = field(end - now) * psi;
  return std::norm(psi(0));
}

double simulated_return_probability(const ScheduledCircuit& c, const NoiseModel& noise) {
  auto cc = compile_circuit(c, noise);
  Rng rng(1);
  auto fields = sample_fields(noise, 1, rng);
  auto psi = evolve(cc, fields, nullptr, false);
  return std::norm(psi[0]);
}

struct XY4Scan {
  std::vector<double> infidelity;
  double max_oracle_error = 0.0;
};

XY4Scan xy4_scan(const std::vector<int>& reps) {
  NoiseModel noise;
  noise.static_field = {{1.4e-4, -0.9e-4, 2.2e-4}};
  const double T = 8000.0;
  GateTimingModel timing;
  ColorAssignment col{{0}, 1};
  auto xy4 = DDStrategy::replicate(sequences::xy4(), 1, false);
  const std::pair<GateKind, GateKind> preps[] = {
      {GateKind::I, GateKind::I}, {GateKind::H, GateKind::H}, {GateKind::SX, GateKind::SXdg}};
  XY4Scan out;
  for (int r : reps) {
    double infid = 0.0;
    for (auto [p, u] : preps) {
      auto base = echo_circuit(p, u, T);
      auto with = insert_dd(base, xy4, col, timing, InsertOptions{r}).circuit;
      double sim = simulated_return_probability(with, noise);
      double orc = oracle_return_probability(with, noise.static_field[0]);
      out.max_oracle_error = std::max(out.max_oracle_error, std::abs(sim - orc));
      infid += (1.0 - sim) / 3.0;
    }
    out.infidelity.push_back(infid);
  }
  return out;
}

struct PairResult {
  double p = 0.0;
  double se = 0.0;
};

// Two coupled qubits in |++> idle for T with J T = 0.5 rad and quasi-static
// Z noise, then return to |00>.
PairResult zz_pair(const std::optional<DDStrategy>& s, int shots) {
  const double J = 1e-4, T = 0.5 / J;
  ScheduledCircuit c(2, {{0, 1}});
  for (int q = 0; q < 2; ++q) {
    Instruction h;
    h.kind = GateKind::H;
    h.qubits = {q, -1};
    h.t0 = 0;
    h.dt = 50;
    c.add(h);
    h.t0 = 50 + T;
    c.add(h);
    Instruction m;
    m.kind = GateKind::Measure;
    m.qubits = {q, -1};
    m.t0 = 100 + T;
    m.dt = 700;
    m.clbit = q;
    c.add(m);
  }
  if (s) c = insert_dd(c, *s, ColorAssignment{{0, 1}, 2}, GateTimingModel{}).circuit;
  NoiseModel noise;
  noise.sigma = {{0, 0, 2e-4}, {0, 0, 2e-4}};
  noise.zz[{0, 1}] = J;
  auto counts = simulate_counts(c, noise, shots, 77);
  double p = success_probability(counts, "00").value;
  return {p, std::sqrt(std::max(p * (1 - p), 1e-12) / shots)};
}

Outcome criterion5() {
  bool a = transparency();
  auto scan = xy4_scan({2, 4, 8, 16});
  double r1 = scan.infidelity[1] > 0 ? scan.infidelity[0] / scan.infidelity[1] : 0.0;
  double r2 = scan.infidelity[2] > 0 ? scan.infidelity[1] / scan.infidelity[2] : 0.0;
  double r3 = scan.infidelity[3] > 0 ? scan.infidelity[2] / scan.infidelity[3] : 0.0;
  bool b = scan.max_oracle_error < 1e-9 && r2 >= 3 && r3 >= 3;

  const int shots = 10000;
  auto none = zz_pair(std::nullopt, shots);
  auto aligned = zz_pair(DDStrategy::replicate(sequences::cpmg(), 2, false), shots);
  auto stag = zz_pair(DDStrategy::replicate(sequences::cpmg(), 2, true), shots);
  double z1 = (stag.p - aligned.p) / std::hypot(stag.se, aligned.se);
  double z2 = (aligned.p - none.p) / std::hypot(aligned.se, none.se);
  bool c = z1 >= 5 && z2 >= 5;

  std::string d = std::string("(a) transparency ") + (a ? "exact" : "broken") + "; (b) oracle error " +
                  num(scan.max_oracle_error, 12) + ", halving ratios " + num(r1, 2) + " " + num(r2, 2) + " " +
                  num(r3, 2) + "; (c) staggered " + num(stag.p) + " aligned " + num(aligned.p) + " none " +
                  num(none.p) + " (" + num(z1, 1) + " SE, " + num(z2, 1) + " SE)";
  return {a && b && c, d};
}

// ---------------------------------------------------------------------------
// 6. BV-9 desk analog

Outcome criterion6() {
  int good = 0;
  std::string d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto cfg = config_for("bv9.toml", "c6_seed" + std::to_string(seed));
    cfg.set_seed(seed);
    auto r = cmd_train(cfg).report;
    double margin = r["margin"].get<double>();
    auto first = r["first_iteration_exceeding"];
    bool early = !first.is_null() && first.get<int>() <= 10;
    bool ok = margin >= 0.02 && early;
    good += ok;
    d += (seed > 1 ? "; " : "") + std::string("seed ") + std::to_string(seed) + ": GADD " +
         num(r["entries"][0]["mean"].get<double>(), 3) + " vs " + r["best_baseline"]["name"].get<std::string>() + " " +
         num(r["best_baseline"]["mean"].get<double>(), 3) + ", first " + (first.is_null() ? "never" : first.dump());
  }
  return {good >= 4, std::to_string(good) + "/5 runs pass (" + d + ")"};
}

// ---------------------------------------------------------------------------
// 7. Cliffordized Grover transfer

Outcome criterion7() {
  auto rc = cmd_train(config_for("grover5_clifford.toml", "c7_clifford")).report;
  auto rr = cmd_train(config_for("grover5.toml", "c7_raw")).report;
  auto gadd_mean = [](const nlohmann::json& r) { return r["entries"][0]["mean"].get<double>(); };
  auto best_canonical = [](const nlohmann::json& r) {
    double best = -1;
    std::string name;
    for (const auto& e : r["entries"]) {
      std::string n = e["name"];
      if (n == "GADD" || n == "no-DD" || e["status"] != "ok") continue;
      if (e["mean"].get<double>() > best) best = e["mean"].get<double>(), name = n;
    }
    return std::make_pair(best, name);
  };
  double mc = gadd_mean(rc), mr = gadd_mean(rr);
  auto [bc, nc] = best_canonical(rc);
  auto [br, nr] = best_canonical(rr);
  bool ok = std::abs(mc - mr) <= 0.05 && mc > bc && mr > br;
  return {ok, "Cliffordized-trained " + num(mc) + ", directly trained " + num(mr) + " (|diff| " +
                  num(std::abs(mc - mr)) + "), best canonical " + nc + " " + num(std::max(bc, br))};
}

// ---------------------------------------------------------------------------
// 8. MRB scan

Outcome criterion8() {
  auto c1 = config_for("mrb_scan.toml", "c8_scan");
  auto r1 = cmd_mrb_scan(c1).report;
  bool every = true;
  std::string d;
  for (const auto& w : r1["widths"]) {
    bool ok = w["gadd_not_worse"].get<bool>();
    every = every && ok;
    d += "N=" + std::to_string(w["width"].get<int>()) + " GADD " +
         (w["gadd_epl"].is_null() ? std::string("no signal") : num(w["gadd_epl"].get<double>(), 5)) + " best " +
         (w["best_canonical_epl"].is_null() ? std::string("none") : num(w["best_canonical_epl"].get<double>(), 5)) +
         "; ";
  }
  auto c3 = config_for("mrb_scan_3x.toml", "c8_scan_3x");
  c3.strategy_file = (fs::path(c1.out_dir) / "report.json").string();
  auto r3 = cmd_mrb_scan(c3).report;
  const int never = std::numeric_limits<int>::max();
  int first_none = never, first_gadd = never;
  for (const auto& w : r3["widths"])
    for (const auto& o : w["options"]) {
      if (o["status"] != "no signal") continue;
      int N = w["width"].get<int>();
      if (o["option"] == "no-DD") first_none = std::min(first_none, N);
      if (o["option"] == "GADD") first_gadd = std::min(first_gadd, N);
    }
  bool order = first_none != never && first_none < first_gadd;
  auto show = [&](int v) { return v == never ? std::string("never") : std::to_string(v); };
  d += "3x noise: no-DD loses signal at N=" + show(first_none) + ", GADD at N=" + show(first_gadd);
  return {every && order, d};
}

// ---------------------------------------------------------------------------
// 9. Persistence under perturbed noise

Outcome criterion9() {
  auto train = config_for("ghz8.toml", "c9_train");
  auto tr = cmd_train(train).report;
  int last = tr["iterations"].get<int>();
  int good = 0;
  std::string d = "training margin " + num(tr["margin"].get<double>()) + "; replays:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto cfg = config_for("ghz8.toml", "c9_replay" + std::to_string(seed));
    cfg.set_seed(seed);
    cfg.replay.checkpoint = (fs::path(train.out_dir) / ("checkpoint_" + std::to_string(last) + ".json")).string();
    auto r = cmd_replay(cfg).report;
    bool ok = r["gadd_outranks_baselines"].get<bool>();
    good += ok;
    d += " " + num(r["saved_best"]["mean"].get<double>()) + "/" + num(r["best_baseline"]["mean"].get<double>());
  }
  return {good >= 4, std::to_string(good) + "/5 perturbations keep GADD on top (" + d + ")"};
}

// ---------------------------------------------------------------------------
// 10. Determinism

Outcome criterion10() {
  auto small = [](ExperimentConfig c) {
    c.sim.trajectories = 8;
    c.ga.shots = 200;
    c.ga.iterations = 2;
    c.baselines.repeats = 2;
    c.explore.trials = 2;
    c.explore.mutation_probs = {0.1, 0.5};
    c.mrb_scan.widths = {2, 4};
    c.mrb_scan.depths = {2, 4, 8};
    c.mrb_scan.circuits_per_depth = 2;
    c.mrb_scan.train_motif = false;
    c.replay.repeats = 2;
    return c;
  };
  struct Job {
    std::string command, file;
  };
  const Job jobs[] = {{"train", "ghz8.toml"},     {"compare-baselines", "bv9.toml"}, {"mrb-scan", "mrb_scan.toml"},
                      {"explore", "explore.toml"}, {"replay", "ghz8.toml"},          {"workload", "bv9.toml"}};
  std::vector<std::string> differing;
  for (const auto& job : jobs) {
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
      auto c = small(config_for(job.file, "c10_" + job.command + "_" + std::to_string(k)));
      if (job.command == "replay") c.replay.checkpoint = (g_out / "c10_train_0" / "checkpoint_2.json").string();
      run_command(job.command, c);
      const char* file = job.command == "workload" ? "workload.json" : "report.json";
      bytes[k] = slurp(fs::path(c.out_dir) / file);
    }
    if (bytes[0].empty() || bytes[0] != bytes[1]) differing.push_back(job.command);
  }
  std::string d = differing.empty() ? "6/6 commands byte-identical" : "differs:";
  for (auto& s : differing) d += " " + s;
  return {differing.empty(), d};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::string out = "acceptance_out";
  app.add_option("--only", only, "criteria to run (default: all)");
  app.add_option("--out", out, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  g_out = out;

  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (int i = 1; i <= 10; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s - %s [%.1f s]\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
