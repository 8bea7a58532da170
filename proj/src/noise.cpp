#include "ddforge/noise.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>

namespace ddforge {

void NoiseModel::validate() const {
  for (const auto& s : sigma)
    for (double v : s)
      if (!(v >= 0)) throw ConfigError("field std-dev must be >= 0");
  for (const auto& [e, j] : zz) {
    if (e.first == e.second || e.first < 0 || e.second < 0) throw ConfigError("invalid ZZ edge");
    if (!std::isfinite(j)) throw ConfigError("ZZ coupling must be finite");
  }
  for (double r : dephasing_rate)
    if (!(r >= 0)) throw ConfigError("dephasing rate must be >= 0");
  for (double p : readout_error)
    if (!(p >= 0 && p <= 0.5)) throw ConfigError("readout error must lie in [0, 0.5]");
  if (!std::isfinite(flip_angle_error)) throw ConfigError("flip-angle error must be finite");
}

bool NoiseModel::is_stochastic() const {
  for (const auto& s : sigma)
    for (double v : s)
      if (v > 0) return true;
  return std::any_of(dephasing_rate.begin(), dephasing_rate.end(), [](double r) { return r > 0; });
}

bool NoiseModel::is_zero() const {
  if (is_stochastic() || flip_angle_error != 0.0 || identity_as_2pi_pulse) return false;
  for (const auto& m : static_field)
    for (double v : m)
      if (v != 0) return false;
  for (const auto& [e, j] : zz)
    if (j != 0) return false;
  return std::all_of(readout_error.begin(), readout_error.end(), [](double p) { return p == 0; });
}

namespace {
template <class T>
T at_or(const std::vector<T>& v, int q, T fallback) {
  if (v.empty()) return fallback;
  if (q < 0 || q >= static_cast<int>(v.size())) throw InvalidArgument("noise model does not cover qubit " + std::to_string(q));
  return v[q];
}
}  // namespace

std::array<double, 3> NoiseModel::sigma_of(int q) const { return at_or(sigma, q, std::array<double, 3>{}); }
std::array<double, 3> NoiseModel::mean_of(int q) const { return at_or(static_field, q, std::array<double, 3>{}); }
double NoiseModel::dephasing_of(int q) const { return at_or(dephasing_rate, q, 0.0); }
double NoiseModel::readout_of(int q) const { return at_or(readout_error, q, 0.0); }

NoiseModel NoiseModel::scaled(double factor) const {
  NoiseModel m = *this;
  for (auto& s : m.sigma)
    for (auto& v : s) v *= factor;
  for (auto& s : m.static_field)
    for (auto& v : s) v *= factor;
  for (auto& [e, j] : m.zz) j *= factor;
  m.flip_angle_error *= factor;
  for (auto& r : m.dephasing_rate) r *= factor;
  for (auto& p : m.readout_error) p = std::min(0.5, p * factor);
  return m;
}

NoiseModel NoiseModel::perturbed(Rng& rng, double lo, double hi) const {
  auto f = [&] { return lo + (hi - lo) * rng.uniform(); };
  NoiseModel m = *this;
  for (auto& s : m.sigma)
    for (auto& v : s) v *= f();
  for (auto& s : m.static_field)
    for (auto& v : s) v *= f();
  for (auto& [e, j] : m.zz) j *= f();
  m.flip_angle_error *= f();
  for (auto& r : m.dephasing_rate) r *= f();
  for (auto& p : m.readout_error) p = std::min(0.5, p * f());
  return m;
}

nlohmann::json NoiseModel::to_json() const {
  nlohmann::json zzj = nlohmann::json::array();
  for (const auto& [e, j] : zz) zzj.push_back({{"edge", {e.first, e.second}}, {"J", j}});
  return {{"sigma", sigma},
          {"static_field", static_field},
          {"zz", zzj},
          {"flip_angle_error", flip_angle_error},
          {"dephasing_rate", dephasing_rate},
          {"readout_error", readout_error},
          {"identity_as_2pi_pulse", identity_as_2pi_pulse}};
}

NoiseModel make_uniform_noise(const Topology& topology, const DeskDeviceParams& p) {
  const int n = topology.num_qubits();
  NoiseModel m;
  m.sigma.assign(n, {p.sigma_xy, p.sigma_xy, p.sigma_z});
  for (auto e : topology.edges()) m.zz[normalized(e)] = p.zz;
  m.flip_angle_error = p.flip_angle_error;
  if (p.dephasing_rate > 0) m.dephasing_rate.assign(n, p.dephasing_rate);
  if (p.readout_error > 0) m.readout_error.assign(n, p.readout_error);
  return m;
}

DeskDeviceParams desk_device_params() { return {}; }

}  // namespace ddforge
