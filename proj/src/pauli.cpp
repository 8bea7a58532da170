#include "ddforge/pauli.hpp"

#include "ddforge/errors.hpp"
#include "ddforge/gates.hpp"

#include <numbers>

namespace ddforge {

Frame frame_product(std::span<const PulseLabel> pulses) {
  Frame f = Frame::I;
  for (auto p : pulses) f = f * p.frame();
  return f;
}

Frame frame_product(std::span<const Frame> frames) {
  Frame f = Frame::I;
  for (auto g : frames) f = f * g;
  return f;
}

Frame completion_frame(Frame prefix, Frame suffix) { return prefix * suffix; }

std::array<PulseLabel, 2> labels_for_frame(Frame f) {
  return {PulseLabel{f, Sign::Plus}, PulseLabel{f, Sign::Minus}};
}

std::vector<Frame> pulses_from_group_path(std::span<const Frame> path) {
  if (path.empty()) throw InvalidArgument("group path must be non-empty");
  std::vector<Frame> pulses;
  pulses.reserve(path.size() + 1);
  pulses.push_back(inverse(path.front()));
  for (std::size_t j = 1; j < path.size(); ++j) pulses.push_back(path[j - 1] * inverse(path[j]));
  pulses.push_back(path.back());
  return pulses;
}

Mat2 pauli_matrix(Frame f) {
  using C = std::complex<double>;
  Mat2 m;
  switch (f) {
    case Frame::I: m << 1, 0, 0, 1; break;
    case Frame::X: m << 0, 1, 1, 0; break;
    case Frame::Y: m << 0, C(0, -1), C(0, 1), 0; break;
    case Frame::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Mat2 pulse_unitary(PulseLabel label, double flip_angle_error, bool identity_as_2pi) {
  const double s = label.sign() == Sign::Plus ? 1.0 : -1.0;
  if (label.is_identity()) {
    if (identity_as_2pi && label.sign() == Sign::Minus)
      return rotation(Frame::X, -(2.0 * std::numbers::pi + 2.0 * flip_angle_error));
    return Mat2::Identity();
  }
  return rotation(label.axis(), s * (std::numbers::pi + flip_angle_error));
}

char to_char(Frame f) {
  switch (f) {
    case Frame::I: return 'I';
    case Frame::X: return 'X';
    case Frame::Y: return 'Y';
    case Frame::Z: return 'Z';
  }
  return '?';
}

std::string to_string(PulseLabel label) {
  return {to_char(label.axis()), label.sign() == Sign::Plus ? 'p' : 'm'};
}

PulseLabel parse_label(std::string_view text) {
  if (text.size() != 2) throw InvalidSequence("bad pulse label '" + std::string(text) + "'");
  Frame axis;
  switch (text[0]) {
    case 'I': axis = Frame::I; break;
    case 'X': axis = Frame::X; break;
    case 'Y': axis = Frame::Y; break;
    case 'Z': axis = Frame::Z; break;
    default: throw InvalidSequence("bad pulse axis in '" + std::string(text) + "'");
  }
  if (text[1] != 'p' && text[1] != 'm')
    throw InvalidSequence("bad pulse sign in '" + std::string(text) + "'");
  return {axis, text[1] == 'p' ? Sign::Plus : Sign::Minus};
}

std::vector<PulseLabel> parse_pulses(std::string_view text) {
  if (text.size() % 2 != 0) throw InvalidSequence("odd-length pulse string '" + std::string(text) + "'");
  std::vector<PulseLabel> out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) out.push_back(parse_label(text.substr(i, 2)));
  return out;
}

std::string format_pulses(std::span<const PulseLabel> pulses) {
  std::string s;
  s.reserve(2 * pulses.size());
  for (auto p : pulses) s += to_string(p);
  return s;
}

}  // namespace ddforge
