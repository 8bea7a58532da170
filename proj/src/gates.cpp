#include "ddforge/gates.hpp"

#include "ddforge/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace ddforge {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct GateInfo {
  GateKind kind;
  std::string_view name;
  int arity;
  int params;
  bool virtual_gate;
};

constexpr GateInfo kGateTable[] = {
    {GateKind::I, "id", 1, 0, false},     {GateKind::X, "x", 1, 0, false},
    {GateKind::Y, "y", 1, 0, false},      {GateKind::Z, "z", 1, 0, true},
    {GateKind::H, "h", 1, 0, false},      {GateKind::S, "s", 1, 0, true},
    {GateKind::Sdg, "sdg", 1, 0, true},   {GateKind::T, "t", 1, 0, true},
    {GateKind::Tdg, "tdg", 1, 0, true},   {GateKind::SX, "sx", 1, 0, false},
    {GateKind::SXdg, "sxdg", 1, 0, false}, {GateKind::RX, "rx", 1, 1, false},
    {GateKind::RY, "ry", 1, 1, false},    {GateKind::RZ, "rz", 1, 1, true},
    {GateKind::U, "u", 1, 3, false},      {GateKind::CX, "cx", 2, 0, false},
    {GateKind::CZ, "cz", 2, 0, false},    {GateKind::SWAP, "swap", 2, 0, false},
    {GateKind::Pulse, "dd", 1, 0, false}, {GateKind::Measure, "measure", 1, 0, false},
};

const GateInfo& info(GateKind kind) {
  for (const auto& g : kGateTable)
    if (g.kind == kind) return g;
  throw InvalidArgument("unknown gate kind");
}

}  // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> parse_gate_name(std::string_view name) {
  for (const auto& g : kGateTable)
    if (g.name == name) return g.kind;
  return std::nullopt;
}

int gate_arity(GateKind kind) { return info(kind).arity; }
int gate_param_count(GateKind kind) { return info(kind).params; }
bool is_virtual(GateKind kind) { return info(kind).virtual_gate; }

Mat2 rotation(Frame axis, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Mat2 m = c * Mat2::Identity() - C(0, s) * pauli_matrix(axis);
  if (axis == Frame::I) m = Mat2::Identity();
  return m;
}

Mat2 rz(double angle) { return rotation(Frame::Z, angle); }
Mat2 rx(double angle) { return rotation(Frame::X, angle); }
Mat2 ry(double angle) { return rotation(Frame::Y, angle); }

Mat2 sx_matrix() {
  Mat2 m;
  m << C(0.5, 0.5), C(0.5, -0.5), C(0.5, -0.5), C(0.5, 0.5);
  return m;
}

Mat2 h_matrix() {
  Mat2 m;
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

Mat2 u_matrix(double p0, double p1, double p2) {
  const Mat2 sx = sx_matrix();
  return rz(p0) * sx * rz(p1) * sx * rz(p2);
}

std::array<double, 3> zsx_angles(const Mat2& m) {
  // m ~ U3(theta, phi, lambda) = RZ(phi + pi) SX RZ(theta + pi) SX RZ(lambda).
  const C det = m.determinant();
  const Mat2 v = m / std::sqrt(det);
  const double theta = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double phi_plus_lambda = 0.0, phi_minus_lambda = 0.0;
  // v = e^{i g} [[cos, -e^{i l} sin], [e^{i p} sin, e^{i(p+l)} cos]]
  if (std::abs(v(0, 0)) > 1e-12) phi_plus_lambda = 2.0 * std::arg(v(1, 1) / v(0, 0)) / 2.0;
  if (std::abs(v(1, 0)) > 1e-12) phi_minus_lambda = 2.0 * std::arg(v(1, 0) / (-v(0, 1))) / 2.0;
  if (std::abs(v(0, 0)) <= 1e-12) phi_plus_lambda = 0.0;
  double phi = 0.5 * (phi_plus_lambda + phi_minus_lambda);
  double lambda = 0.5 * (phi_plus_lambda - phi_minus_lambda);
  if (std::abs(v(1, 0)) <= 1e-12) {
    phi = phi_plus_lambda;
    lambda = 0.0;
  }
  std::array<double, 3> angles{phi + kPi, theta + kPi, lambda};
  // The half-angle branch above can be off by a global -1; verify and repair.
  if (!equal_up_to_phase(u_matrix(angles[0], angles[1], angles[2]), m, 1e-7)) {
    angles[0] += kPi;
    angles[2] += kPi;
  }
  for (auto& a : angles) a = std::remainder(a, 2 * kPi);
  return angles;
}

Mat2 gate_matrix_1q(GateKind kind, std::span<const double> params, PulseLabel pulse) {
  switch (kind) {
    case GateKind::I: return Mat2::Identity();
    case GateKind::X: return pauli_matrix(Frame::X);
    case GateKind::Y: return pauli_matrix(Frame::Y);
    case GateKind::Z: return pauli_matrix(Frame::Z);
    case GateKind::H: return h_matrix();
    case GateKind::S: return Mat2{{1, 0}, {0, C(0, 1)}};
    case GateKind::Sdg: return Mat2{{1, 0}, {0, C(0, -1)}};
    case GateKind::T: return Mat2{{1, 0}, {0, std::polar(1.0, kPi / 4)}};
    case GateKind::Tdg: return Mat2{{1, 0}, {0, std::polar(1.0, -kPi / 4)}};
    case GateKind::SX: return sx_matrix();
    case GateKind::SXdg: return sx_matrix().adjoint();
    case GateKind::RX: return rx(params[0]);
    case GateKind::RY: return ry(params[0]);
    case GateKind::RZ: return rz(params[0]);
    case GateKind::U: return u_matrix(params[0], params[1], params[2]);
    case GateKind::Pulse: return pulse_unitary(pulse, 0.0);
    default: throw InvalidArgument("not a one-qubit unitary gate: " + std::string(gate_name(kind)));
  }
}

Mat4 gate_matrix_2q(GateKind kind) {
  Mat4 m = Mat4::Zero();
  switch (kind) {
    case GateKind::CX:
      m(0, 0) = m(2, 2) = 1;
      m(3, 1) = m(1, 3) = 1;
      return m;
    case GateKind::CZ:
      m(0, 0) = m(1, 1) = m(2, 2) = 1;
      m(3, 3) = -1;
      return m;
    case GateKind::SWAP:
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    default: throw InvalidArgument("not a two-qubit gate: " + std::string(gate_name(kind)));
  }
}

Mat2 over_rotate(const Mat2& m, double fraction) {
  if (fraction == 0.0) return m;
  const C phase = std::sqrt(m.determinant());
  Mat2 v = m / phase;
  if (v(0, 0).real() + v(1, 1).real() < 0) v = -v;
  const double c = std::clamp(0.5 * (v(0, 0).real() + v(1, 1).real()), -1.0, 1.0);
  double nx = -v(1, 0).imag(), ny = v(1, 0).real(), nz = -v(0, 0).imag();
  const double s = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (s < 1e-15) return m;
  nx /= s, ny /= s, nz /= s;
  const double theta = 2.0 * std::atan2(s, c) * (1.0 + fraction);
  const double ch = std::cos(theta / 2), sh = std::sin(theta / 2);
  Mat2 r;
  r << C(ch, -sh * nz), C(-sh * ny, -sh * nx), C(sh * ny, -sh * nx), C(ch, sh * nz);
  return phase * r;
}

bool is_clifford_angle(double angle, double tol) {
  const double k = angle / (kPi / 2);
  return std::abs(k - std::round(k)) < tol;
}

bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol) {
  // |tr(a^dag b)| = 2 iff b = e^{i g} a for unitaries.
  return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < tol;
}

}  // namespace ddforge
