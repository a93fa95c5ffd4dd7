#include "sptq/noise.hpp"

#include <cmath>
#include <numbers>

namespace sptq {

namespace {

void check_coherence(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(errc::range,
                std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

Matrix dof_z(Dof dof) {
  Vector d(4);
  if (dof == Dof::Momentum) {
    d << 1, 1, -1, -1;
  } else {
    d << 1, -1, 1, -1;
  }
  return d.asDiagonal();
}

}  // namespace

std::vector<Matrix> dephasing_kraus(Dof dof, double v) {
  check_coherence(v, "dephasing coherence");
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt((1.0 + v) / 2.0) * Matrix::Identity(4, 4));
  kraus.push_back(std::sqrt((1.0 - v) / 2.0) * dof_z(dof));
  return kraus;
}

PairState dephase_subsystem(const PairState& state, Photon photon, Dof dof,
                            double v) {
  return apply_kraus(state, photon, dephasing_kraus(dof, v));
}

Matrix dephase_subsystem(const Matrix& photon_rho, Dof dof, double v) {
  if (photon_rho.rows() != 4 || photon_rho.cols() != 4) {
    throw Error(errc::dimension, "dephase_subsystem: expected a 4x4 density");
  }
  check_coherence(v, "dephasing coherence");
  Matrix z = dof_z(dof);
  return (1.0 + v) / 2.0 * photon_rho + (1.0 - v) / 2.0 * z * photon_rho * z;
}

PairState imperfect_swap_pipeline(const SourceParams& src, const GateNoise& gate,
                                  const PipelineOptions& options) {
  check_coherence(gate.v_bs, "beam-splitter coherence");
  check_coherence(gate.v_dp, "dove-prism coherence");
  PairState state = circuit(noisy_source(src), swap_circuit(options.variant));
  double v = gate.effective_coherence();
  if (options.per_photon_gate_noise) {
    state = dephase_subsystem(state, Photon::Signal, Dof::Polarization, v);
    state = dephase_subsystem(state, Photon::Idler, Dof::Polarization, v);
  } else {
    state = dephase_subsystem(state, Photon::Signal, Dof::Polarization, v);
  }
  return state;
}

double classical_gate_visibility(const GateNoise& gate, bool with_dove_prism) {
  check_coherence(gate.v_bs, "beam-splitter coherence");
  check_coherence(gate.v_dp, "dove-prism coherence");
  double v = with_dove_prism ? gate.effective_coherence() : gate.v_bs;

  Matrix rho = classical_probe_state(std::numbers::pi / 4).density();
  Matrix s = swap_gate().mat;
  rho = s * rho * s.adjoint();
  rho = dephase_subsystem(rho, Dof::Polarization, v);

  // Analyzer fringe over the polarization qubit: I(t) has Fourier
  // coefficients (rho00 - rho11) on cos 2t and 2 Re rho01 on sin 2t.
  Matrix pol = trace_out_dof(rho, Dof::Polarization);
  double bcos = (pol(0, 0) - pol(1, 1)).real();
  double bsin = 2.0 * pol(0, 1).real();
  double total = pol.trace().real();
  return std::sqrt(bcos * bcos + bsin * bsin) / total;
}

double decompose_fidelity(double v45, double v_c1) {
  if (!(v_c1 > 0.0 && v_c1 <= 1.0)) {
    throw Error(errc::range, "classical visibility must lie in (0,1], got " +
                                 std::to_string(v_c1));
  }
  if (!(v45 >= 0.0)) {
    throw Error(errc::range,
                "quantum visibility must be nonnegative, got " + std::to_string(v45));
  }
  if (v45 > v_c1) {
    throw Error(errc::budget,
                "quantum visibility " + std::to_string(v45) +
                    " exceeds the classical bound " + std::to_string(v_c1));
  }
  return v45 / v_c1;
}

}  // namespace sptq
