#pragma once

#include "ddforge/pauli.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace ddforge {

using Mat4 = Eigen::Matrix4cd;

enum class GateKind : std::uint8_t {
  I, X, Y, Z, H, S, Sdg, T, Tdg, SX, SXdg,
  RX, RY, RZ,
  U,  // RZ(p0) * SX * RZ(p1) * SX * RZ(p2), rightmost applied first
  CX, CZ, SWAP,
  Pulse,
  Measure,
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);
int gate_arity(GateKind kind);
int gate_param_count(GateKind kind);
// Frame changes implemented in software: zero duration, no flip-angle error.
bool is_virtual(GateKind kind);

// exp(-i angle/2 sigma_axis)
Mat2 rotation(Frame axis, double angle);
Mat2 rz(double angle);
Mat2 rx(double angle);
Mat2 ry(double angle);
Mat2 sx_matrix();
Mat2 h_matrix();
Mat2 u_matrix(double p0, double p1, double p2);

// Angles (p0, p1, p2) with u_matrix(p0, p1, p2) equal to m up to global phase.
std::array<double, 3> zsx_angles(const Mat2& m);

// Ideal matrix of a one-qubit gate (Pulse uses pulse_unitary with no error).
Mat2 gate_matrix_1q(GateKind kind, std::span<const double> params, PulseLabel pulse = {});

// Two-qubit matrix in the local basis |a b> -> index a + 2 b, where a is the
// first listed qubit (the control for CX).
Mat4 gate_matrix_2q(GateKind kind);

// Scales the rotation angle of m (as an SU(2) rotation with angle in [0, pi])
// by (1 + fraction).
Mat2 over_rotate(const Mat2& m, double fraction);

// True when angle is an integer multiple of pi/2 within tol.
bool is_clifford_angle(double angle, double tol = 1e-9);

// Equality of unitaries up to a global phase.
bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol = 1e-9);

}  // namespace ddforge
