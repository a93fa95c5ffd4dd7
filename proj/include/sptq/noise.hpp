#pragma once

// Imperfection channels and the visibility-budget arithmetic: dephasing on
// a chosen degree of freedom, the noisy end-to-end transfer pipeline, and
// the classical (attenuated-laser) gate characterization.

#include <vector>

#include "sptq/gates.hpp"
#include "sptq/hilbert.hpp"
#include "sptq/source.hpp"

namespace sptq {

/// Interferometer coherence factors: beam-splitter wavefront term and dove
/// prism term. The gate as a whole dephases polarization by their product.
struct GateNoise {
  double v_bs = 1.0;
  double v_dp = 1.0;
  double effective_coherence() const { return v_bs * v_dp; }
};

/// Kraus pair { sqrt((1+v)/2) I, sqrt((1-v)/2) Z_dof } acting on a single
/// photon; scales every coherence between the 0 and 1 levels of dof by v.
std::vector<Matrix> dephasing_kraus(Dof dof, double v);

/// Dephase one photon of the pair.
PairState dephase_subsystem(const PairState& state, Photon photon, Dof dof,
                            double v);
/// Dephase a lone photon given as a 4x4 density matrix.
Matrix dephase_subsystem(const Matrix& photon_rho, Dof dof, double v);

struct PipelineOptions {
  CircuitVariant variant = CircuitVariant::FullSwap;
  // Apply the gate dephasing to each photon separately (squares the
  // factor). Off by default: the visibility budget counts one gate factor.
  bool per_photon_gate_noise = false;
};

/// noisy_source -> transfer circuit -> polarization dephasing with
/// v = v_bs * v_dp. The 45-degree fringe visibility of the result equals
/// source coherence times gate coherence.
PairState imperfect_swap_pipeline(const SourceParams& src, const GateNoise& gate,
                                  const PipelineOptions& options = {});

/// 45-degree probe through the swap with polarization dephasing
/// v_bs * v_dp (prism in) or v_bs (prism out); returns the analyzer fringe
/// visibility, which equals that coherence factor.
double classical_gate_visibility(const GateNoise& gate, bool with_dove_prism);

/// Invert the multiplicative budget: source coherence = v45 / v_c1.
double decompose_fidelity(double v45, double v_c1);

}  // namespace sptq
