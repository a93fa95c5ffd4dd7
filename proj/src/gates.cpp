#include "sptq/gates.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace sptq {

namespace {

std::string format_degrees(double theta) {
  std::ostringstream ss;
  ss << theta * 180.0 / std::numbers::pi;
  return ss.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, e - b + 1);
}

double parse_degrees(const std::string& text, const std::string& label) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  double deg = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(deg)) {
    throw Error(errc::schema, "bad angle in gate label '" + label + "'");
  }
  return deg * std::numbers::pi / 180.0;
}

}  // namespace

Matrix hwp_jones(double theta) {
  double c = std::cos(2.0 * theta);
  double s = std::sin(2.0 * theta);
  Matrix j(2, 2);
  j << c, s, s, -c;
  return j;
}

GateOp hwp(double theta) {
  Matrix m = tensor(Matrix::Identity(2, 2), hwp_jones(theta));
  return {std::move(m), "hwp(" + format_degrees(theta) + ")"};
}

GateOp path_waveplate(Momentum path, double theta) {
  Matrix m = Matrix::Identity(4, 4);
  m.block(2 * static_cast<int>(path), 2 * static_cast<int>(path), 2, 2) =
      hwp_jones(theta);
  return {std::move(m), std::string("path_hwp(") +
                            (path == Momentum::T ? "T" : "B") + "," +
                            format_degrees(theta) + ")"};
}

GateOp m_cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(3, 2) = 1.0;
  m(2, 3) = 1.0;
  return {std::move(m), "m_cnot"};
}

GateOp p_cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(2, 2) = 1.0;
  m(3, 1) = 1.0;
  m(1, 3) = 1.0;
  return {std::move(m), "p_cnot"};
}

GateOp swap_gate() {
  Matrix m = m_cnot().mat * p_cnot().mat * m_cnot().mat;
  return {std::move(m), "swap"};
}

GateOp parse_gate(const std::string& label) {
  const std::string t = trim(label);
  if (t == "m_cnot") return m_cnot();
  if (t == "p_cnot") return p_cnot();
  if (t == "swap") return swap_gate();
  if (t.starts_with("hwp(") && t.ends_with(")")) {
    return hwp(parse_degrees(t.substr(4, t.size() - 5), label));
  }
  if (t.starts_with("path_hwp(") && t.ends_with(")")) {
    std::string inner = t.substr(9, t.size() - 10);
    auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw Error(errc::schema, "path_hwp needs '<T|B>,<degrees>': '" + label + "'");
    }
    std::string arm = trim(inner.substr(0, comma));
    Momentum path;
    if (arm == "T") {
      path = Momentum::T;
    } else if (arm == "B") {
      path = Momentum::B;
    } else {
      throw Error(errc::schema, "path must be T or B in '" + label + "'");
    }
    return path_waveplate(path, parse_degrees(inner.substr(comma + 1), label));
  }
  throw Error(errc::schema, "unknown gate '" + label + "'");
}

std::vector<CircuitStep> swap_circuit(CircuitVariant variant) {
  std::vector<CircuitStep> steps;
  auto layer = [&steps](const GateOp& g) {
    steps.push_back({Photon::Signal, g});
    steps.push_back({Photon::Idler, g});
  };
  layer(m_cnot());
  layer(p_cnot());
  if (variant == CircuitVariant::FullSwap) layer(m_cnot());
  return steps;
}

PairState circuit(const PairState& input, const std::vector<CircuitStep>& steps) {
  PairState state = input;
  for (const CircuitStep& step : steps) {
    state = apply_to_photon(state, step.photon, step.gate.mat);
  }
  return state;
}

Vector transfer_target_ket(CircuitVariant variant) {
  Vector v = Vector::Zero(16);
  const double a = 1.0 / std::numbers::sqrt2;
  // Momentum stays |T_S B_I> in both variants; polarization carries the
  // Bell pair: (HV+VH)/sqrt(2) for the full swap, (HH+VV)/sqrt(2) without
  // the final M-CNOT.
  Polarization idler_first = variant == CircuitVariant::FullSwap
                                 ? Polarization::V
                                 : Polarization::H;
  Polarization idler_second = variant == CircuitVariant::FullSwap
                                  ? Polarization::H
                                  : Polarization::V;
  v(basis::pair_index(basis::photon_index(Momentum::T, Polarization::H),
                      basis::photon_index(Momentum::B, idler_first))) = a;
  v(basis::pair_index(basis::photon_index(Momentum::T, Polarization::V),
                      basis::photon_index(Momentum::B, idler_second))) = a;
  return v;
}

}  // namespace sptq
