#pragma once

// Single-photon two-qubit gates. Momentum plays the control for the
// momentum-controlled NOT, polarization for the polarization-controlled
// NOT; a cascade of three alternating CNOTs realizes the qubit swap.

#include <string>
#include <vector>

#include "sptq/hilbert.hpp"

namespace sptq {

/// A 4x4 unitary together with the label it round-trips through configs as.
struct GateOp {
  Matrix mat;
  std::string label;
};

/// Jones matrix of a half-wave plate at angle theta (radians):
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Matrix hwp_jones(double theta);

/// Half-wave plate acting on polarization in both momentum arms.
GateOp hwp(double theta);

/// Half-wave plate inserted in a single momentum arm.
GateOp path_waveplate(Momentum path, double theta);

/// Momentum-controlled polarization flip: X on polarization in the B arm.
GateOp m_cnot();

/// Polarization-controlled momentum flip: X on momentum for V polarization.
GateOp p_cnot();

/// Swap of the momentum and polarization qubits, composed from three CNOTs.
GateOp swap_gate();

/// Parse a gate label: "m_cnot", "p_cnot", "swap", "hwp(<degrees>)" or
/// "path_hwp(<T|B>,<degrees>)". Throws E_SCHEMA on anything else.
GateOp parse_gate(const std::string& label);

enum class CircuitVariant { FullSwap, NoFinalMcnot };

struct CircuitStep {
  Photon photon;
  GateOp gate;
};

/// The entanglement-transfer circuit applied to both photons. FullSwap runs
/// the complete M, P, M cascade; NoFinalMcnot stops after the first two
/// layers, as in the demonstration that omits the closing CNOT.
std::vector<CircuitStep> swap_circuit(CircuitVariant variant);

/// Left-fold of the steps over the state.
PairState circuit(const PairState& input, const std::vector<CircuitStep>& steps);

/// Ideal output ket of swap_circuit(variant) on the nominal source state.
Vector transfer_target_ket(CircuitVariant variant);

}  // namespace sptq
