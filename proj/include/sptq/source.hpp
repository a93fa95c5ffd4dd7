#pragma once

// Photon-pair source models: the ideal momentum-entangled pair with a
// polarization product, a dephased/white-noise variant of it, and the
// attenuated-laser probe used for classical gate characterization.

#include "sptq/hilbert.hpp"

namespace sptq {

struct SourceParams {
  double momentum_coherence = 1.0;  // off-diagonal survival factor
  double white_noise = 1.0;         // weight of the coherent part (1 = none)
};

/// Ket of the nominal pair: (|T_S B_I> + |B_S T_I>)/sqrt(2) (x) |H_S V_I>.
Vector spdc_pair_ket();
PairState spdc_pair_state();

/// Momentum dephasing (coherence scale v) plus optional white-noise
/// admixture on the momentum subsystem, polarization product untouched.
PairState noisy_source(const SourceParams& params);

/// Linearly polarized light filling both beam halves:
/// (|T> + |B>)/sqrt(2) (x) (cos t |H> + sin t |V>).
PhotonState classical_probe_state(double pol_angle);

}  // namespace sptq
