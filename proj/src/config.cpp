#include "ddforge/config.hpp"

#include "ddforge/errors.hpp"

#include <toml.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ddforge {

namespace {

class Section {
 public:
  Section(const toml::table* t, std::string name) : t_(t), name_(std::move(name)) {}

  bool present() const { return t_ != nullptr; }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!t_) return;
    const toml::node* n = t_->get(key);
    if (!n) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (auto v = n->value<bool>()) return void(out = *v);
    } else if constexpr (std::is_integral_v<T>) {
      if (auto v = n->value<std::int64_t>()) {
        if (*v < 0 && std::is_unsigned_v<T>) fail(key, "must be non-negative");
        return void(out = static_cast<T>(*v));
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (auto v = n->value<double>()) return void(out = *v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = n->value<std::string>()) return void(out = *v);
    } else if constexpr (std::is_same_v<T, std::vector<int>> || std::is_same_v<T, std::vector<double>> ||
                         std::is_same_v<T, std::vector<std::string>>) {
      if (auto* arr = n->as_array()) {
        T v;
        for (const auto& e : *arr) {
          using E = typename T::value_type;
          std::optional<E> x;
          if constexpr (std::is_same_v<E, int>) {
            if (auto y = e.value<std::int64_t>()) x = static_cast<int>(*y);
          } else {
            x = e.value<E>();
          }
          if (!x) fail(key, "has an element of the wrong type");
          v.push_back(*x);
        }
        return void(out = std::move(v));
      }
    }
    fail(key, "has the wrong type");
  }

  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_)
      if (!seen_.count(std::string(k.str())) && !v.is_table())
        throw ConfigError("unknown key '" + std::string(k.str()) + "' in [" + name_ + "]");
  }

  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError("[" + name_ + "] " + key + " " + what);
  }

 private:
  const toml::table* t_;
  std::string name_;
  std::set<std::string> seen_;
};

const toml::table* subtable(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(std::string("[") + name + "] must be a table");
  return n->as_table();
}

WorkloadKind parse_workload(const std::string& s) {
  if (s == "bv") return WorkloadKind::BV;
  if (s == "ghz") return WorkloadKind::GHZ;
  if (s == "grover") return WorkloadKind::Grover;
  if (s == "mrb") return WorkloadKind::MRB;
  throw ConfigError("unknown workload kind '" + s + "'");
}

MrbFlavor parse_flavor(const std::string& s) {
  if (s == "clifford") return MrbFlavor::Clifford;
  if (s == "su2") return MrbFlavor::Su2;
  throw ConfigError("unknown MRB flavor '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::string_view workload_name(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::BV: return "bv";
    case WorkloadKind::GHZ: return "ghz";
    case WorkloadKind::Grover: return "grover";
    case WorkloadKind::MRB: return "mrb";
  }
  return "?";
}

NoiseModel NoiseConfig::build(const Topology& topology) const {
  NoiseModel m;
  if (preset == "desk")
    m = make_uniform_noise(topology, params);
  else if (preset != "zero")
    throw ConfigError("unknown noise preset '" + preset + "'");
  m.identity_as_2pi_pulse = identity_as_2pi;
  if (scale != 1.0) m = m.scaled(scale);
  m.validate();
  return m;
}

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  has_seed = true;
  ga.seed = s;
  explore.seed = s;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  ExperimentConfig c;
  c.config_hash = fnv1a(text);

  Section top(&root, "root");
  std::int64_t seed = -1;
  top.get("seed", seed);
  top.get("command", c.command);
  top.get("out", c.out_dir);
  top.get("strategy_file", c.strategy_file);
  top.get("resume", c.resume);
  top.finish();
  if (seed >= 0) c.set_seed(static_cast<std::uint64_t>(seed));

  {
    Section s(subtable(root, "workload"), "workload");
    std::string kind = "bv", flavor = "clifford";
    s.get("kind", kind);
    c.workload.kind = parse_workload(kind);
    s.get("n", c.workload.n);
    s.get("topology", c.workload.topology);
    s.get("oracle", c.workload.oracle);
    s.get("iterations", c.workload.iterations);
    s.get("cliffordize", c.workload.cliffordize);
    s.get("evaluate_all_oracles", c.workload.evaluate_all_oracles);
    s.get("layers", c.workload.layers);
    s.get("count", c.workload.count);
    s.get("flavor", flavor);
    c.workload.flavor = parse_flavor(flavor);
    s.get("xi", c.workload.xi);
    s.finish();
    if (c.workload.n < 1) throw ConfigError("[workload] n must be positive");
    if (c.workload.topology != "linear" && c.workload.topology != "all_to_all" && c.workload.topology != "heavy_hex")
      throw ConfigError("unknown topology '" + c.workload.topology + "'");
  }
  {
    Section s(subtable(root, "noise"), "noise");
    auto& p = c.noise.params;
    s.get("preset", c.noise.preset);
    s.get("sigma_z", p.sigma_z);
    s.get("sigma_xy", p.sigma_xy);
    s.get("zz", p.zz);
    s.get("flip_angle_error", p.flip_angle_error);
    s.get("dephasing_rate", p.dephasing_rate);
    s.get("readout_error", p.readout_error);
    s.get("scale", c.noise.scale);
    s.get("identity_as_2pi", c.noise.identity_as_2pi);
    s.finish();
    if (c.noise.preset != "desk" && c.noise.preset != "zero")
      throw ConfigError("unknown noise preset '" + c.noise.preset + "'");
    if (c.noise.scale < 0) throw ConfigError("[noise] scale must be non-negative");
  }
  {
    Section s(subtable(root, "timing"), "timing");
    s.get("one_qubit", c.timing.one_qubit);
    s.get("two_qubit", c.timing.two_qubit);
    s.get("pulse", c.timing.pulse);
    s.get("measurement", c.timing.measurement);
    s.finish();
    c.timing.validate();
  }
  {
    Section s(subtable(root, "sim"), "sim");
    s.get("trajectories", c.sim.trajectories);
    s.get("max_step", c.sim.max_step);
    s.get("max_qubits", c.sim.max_qubits);
    s.finish();
    if (c.sim.trajectories < 0 || !(c.sim.max_step > 0)) throw ConfigError("[sim] values out of range");
  }
  {
    Section s(subtable(root, "ga"), "ga");
    auto& g = c.ga;
    s.get("K", g.K);
    s.get("L", g.L);
    s.get("iterations", g.iterations);
    s.get("shots", g.shots);
    s.get("mutation_prob_init", g.mutation_prob_init);
    s.get("mutation_step", g.mutation_step);
    std::vector<double> bounds;
    s.get("mutation_bounds", bounds);
    if (!bounds.empty()) {
      if (bounds.size() != 2) throw ConfigError("[ga] mutation_bounds needs two values");
      g.mutation_low = bounds[0];
      g.mutation_high = bounds[1];
    }
    std::string stat = "range", direction = "paper";
    s.get("statistic", stat);
    if (stat == "range")
      g.proxy.statistic = ProxyStatistic::Range;
    else if (stat == "stddev")
      g.proxy.statistic = ProxyStatistic::Stddev;
    else
      throw ConfigError("[ga] statistic must be range or stddev");
    s.get("far_threshold", g.proxy.far_threshold);
    s.get("close_threshold", g.proxy.close_threshold);
    s.get("mutation_direction", direction);
    if (direction == "paper")
      g.direction = MutationDirection::Paper;
    else if (direction == "inverted")
      g.direction = MutationDirection::Inverted;
    else
      throw ConfigError("[ga] mutation_direction must be paper or inverted");
    double target = -1;
    s.get("target_utility", target);
    if (target >= 0) g.target_utility = target;
    s.finish();
    g.validate();
  }
  {
    Section s(subtable(root, "dd"), "dd");
    s.get("max_colors", c.dd.max_colors);
    s.get("repetitions", c.dd.repetitions);
    s.finish();
    if (c.dd.max_colors < 1 || c.dd.repetitions < 1) throw ConfigError("[dd] values must be positive");
  }
  {
    Section s(subtable(root, "baselines"), "baselines");
    s.get("names", c.baselines.names);
    s.get("repeats", c.baselines.repeats);
    s.finish();
    if (c.baselines.repeats < 1) throw ConfigError("[baselines] repeats must be positive");
  }
  {
    Section s(subtable(root, "mrb_scan"), "mrb_scan");
    auto& m = c.mrb_scan;
    s.get("widths", m.widths);
    s.get("depths", m.depths);
    s.get("circuits_per_depth", m.circuits_per_depth);
    s.get("train_motif", m.train_motif);
    s.get("motif_width", m.motif_width);
    s.get("motif_layers", m.motif_layers);
    s.get("motif_count", m.motif_count);
    s.finish();
    for (int d : m.depths)
      if (d < 0 || d % 2) throw ConfigError("[mrb_scan] depths must be even");
    if (m.circuits_per_depth < 1) throw ConfigError("[mrb_scan] circuits_per_depth must be positive");
  }
  {
    Section s(subtable(root, "explore"), "explore");
    auto& e = c.explore;
    s.get("trials", e.trials);
    s.get("L", e.L);
    s.get("iterations", e.iterations);
    s.get("initial_size", e.initial_size);
    s.get("population_cap", e.population_cap);
    s.get("mutation_probs", e.mutation_probs);
    s.finish();
    if (e.trials < 1 || e.iterations < 0) throw ConfigError("[explore] values out of range");
  }
  {
    Section s(subtable(root, "replay"), "replay");
    auto& r = c.replay;
    s.get("checkpoint", r.checkpoint);
    s.get("perturb_low", r.perturb_low);
    s.get("perturb_high", r.perturb_high);
    s.get("noise_scale", r.noise_scale);
    s.get("repeats", r.repeats);
    s.finish();
    if (!(r.perturb_low > 0 && r.perturb_low <= r.perturb_high) || r.repeats < 1)
      throw ConfigError("[replay] values out of range");
  }
  for (auto&& [k, v] : root)
    if (v.is_table()) {
      static const std::set<std::string> known = {"workload", "noise", "timing", "sim", "ga", "dd",
                                                  "baselines", "mrb_scan", "explore", "replay"};
      if (!known.count(std::string(k.str()))) throw ConfigError("unknown section [" + std::string(k.str()) + "]");
    }

  for (auto* p : {&c.replay.checkpoint, &c.strategy_file, &c.resume})
    if (!p->empty()) {
      *p = resolve(base_dir, *p).lexically_normal().string();
    }
  if (!std::filesystem::path(c.out_dir).is_absolute()) c.out_dir = (base_dir / c.out_dir).lexically_normal().string();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

}  // namespace ddforge
