#pragma once

#include "ddforge/graph.hpp"
#include "ddforge/rng.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <vector>

namespace ddforge {

// Classical-stochastic noise surrogate. Per-qubit vectors may be empty
// (meaning zero) or must cover every simulated qubit.
struct NoiseModel {
  // Std-dev of the quasi-static field per axis (x, y, z), rad/ns.
  std::vector<std::array<double, 3>> sigma;
  // Mean static field per axis, rad/ns.
  std::vector<std::array<double, 3>> static_field;
  // Always-on J sigma_z sigma_z / 4 per edge, rad/ns.
  std::map<Edge, double> zz;
  // Systematic over-rotation of physical pulses and gates, rad.
  double flip_angle_error = 0.0;
  std::vector<double> dephasing_rate;  // 1/ns
  std::vector<double> readout_error;   // flip probability
  bool identity_as_2pi_pulse = false;

  void validate() const;
  // True if any per-trajectory randomness exists (fields or dephasing).
  bool is_stochastic() const;
  bool is_zero() const;

  std::array<double, 3> sigma_of(int q) const;
  std::array<double, 3> mean_of(int q) const;
  double dephasing_of(int q) const;
  double readout_of(int q) const;

  // Every magnitude multiplied by factor (readout clamped to 0.5).
  NoiseModel scaled(double factor) const;
  // Each scalar parameter multiplied by an independent uniform factor in [lo, hi].
  NoiseModel perturbed(Rng& rng, double lo, double hi) const;

  nlohmann::json to_json() const;
};

struct DeskDeviceParams {
  double sigma_z = 2e-4;
  double sigma_xy = 5e-5;
  double zz = 1e-4;
  double flip_angle_error = 0.02;
  double dephasing_rate = 0.0;
  double readout_error = 0.0;
};

// Uniform noise over n qubits with ZZ on every coupling edge.
NoiseModel make_uniform_noise(const Topology& topology, const DeskDeviceParams& p);

// Calibrated default preset.
DeskDeviceParams desk_device_params();

}  // namespace ddforge
