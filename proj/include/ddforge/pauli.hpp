#pragma once

// Algebra of the decoupling group G = {Ip, Im, Xp, Xm, Yp, Ym, Zp, Zm}.
//
// Each label maps to a phase-free Pauli frame. Frames form Z2 x Z2 under
// multiplication, encoded as two bits (x, z) so that the product is XOR:
// I = 00, X = 01, Z = 10, Y = 11.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddforge {

using Mat2 = Eigen::Matrix2cd;

enum class Frame : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr Frame operator*(Frame a, Frame b) {
  return static_cast<Frame>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr Frame inverse(Frame f) { return f; }

enum class Sign : std::uint8_t { Plus = 0, Minus = 1 };

class PulseLabel {
 public:
  constexpr PulseLabel() = default;
  constexpr PulseLabel(Frame axis, Sign sign) : axis_(axis), sign_(sign) {}

  // Index into kDecouplingGroup (Ip, Im, Xp, Xm, Yp, Ym, Zp, Zm).
  static constexpr PulseLabel from_index(int i) {
    constexpr Frame axes[4] = {Frame::I, Frame::X, Frame::Y, Frame::Z};
    return {axes[(i >> 1) & 3], (i & 1) ? Sign::Minus : Sign::Plus};
  }
  constexpr int index() const {
    int a = axis_ == Frame::I ? 0 : axis_ == Frame::X ? 1 : axis_ == Frame::Y ? 2 : 3;
    return 2 * a + (sign_ == Sign::Minus ? 1 : 0);
  }

  constexpr Frame axis() const { return axis_; }
  constexpr Sign sign() const { return sign_; }
  constexpr Frame frame() const { return axis_; }
  constexpr bool is_identity() const { return axis_ == Frame::I; }

  friend constexpr bool operator==(PulseLabel, PulseLabel) = default;

 private:
  Frame axis_ = Frame::I;
  Sign sign_ = Sign::Plus;
};

namespace labels {
inline constexpr PulseLabel Ip{Frame::I, Sign::Plus};
inline constexpr PulseLabel Im{Frame::I, Sign::Minus};
inline constexpr PulseLabel Xp{Frame::X, Sign::Plus};
inline constexpr PulseLabel Xm{Frame::X, Sign::Minus};
inline constexpr PulseLabel Yp{Frame::Y, Sign::Plus};
inline constexpr PulseLabel Ym{Frame::Y, Sign::Minus};
inline constexpr PulseLabel Zp{Frame::Z, Sign::Plus};
inline constexpr PulseLabel Zm{Frame::Z, Sign::Minus};
}  // namespace labels

inline constexpr std::array<PulseLabel, 8> kDecouplingGroup = {
    labels::Ip, labels::Im, labels::Xp, labels::Xm,
    labels::Yp, labels::Ym, labels::Zp, labels::Zm};

inline constexpr int kGroupSize = 8;

Frame frame_product(std::span<const PulseLabel> pulses);
Frame frame_product(std::span<const Frame> frames);

// The unique f with prefix * f * suffix = I.
Frame completion_frame(Frame prefix, Frame suffix);

std::array<PulseLabel, 2> labels_for_frame(Frame f);

// Group path g_1..g_{L-1} -> pulse frames p_1..p_L with p_1 = g_1^-1,
// p_j = g_{j-1} g_j^-1 and p_L = g_{L-1}.
std::vector<Frame> pulses_from_group_path(std::span<const Frame> path);

// Physical realization of a pulse. A-axis labels rotate by
// sign * (pi + flip_angle_error); Ip/Im are exact identities unless
// identity_as_2pi is set, in which case Im is a 2pi X rotation carrying twice
// the flip-angle error.
Mat2 pulse_unitary(PulseLabel label, double flip_angle_error, bool identity_as_2pi = false);

// Ideal 2x2 Pauli matrix for a frame.
Mat2 pauli_matrix(Frame f);

char to_char(Frame f);
std::string to_string(PulseLabel label);
PulseLabel parse_label(std::string_view text);
std::vector<PulseLabel> parse_pulses(std::string_view text);
std::string format_pulses(std::span<const PulseLabel> pulses);

}  // namespace ddforge
