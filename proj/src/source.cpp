#include "sptq/source.hpp"

#include <cmath>
#include <numbers>

namespace sptq {

namespace {

constexpr int kTopBottom =
    basis::pair_index(basis::photon_index(Momentum::T, Polarization::H),
                      basis::photon_index(Momentum::B, Polarization::V));
constexpr int kBottomTop =
    basis::pair_index(basis::photon_index(Momentum::B, Polarization::H),
                      basis::photon_index(Momentum::T, Polarization::V));

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(errc::range,
                std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

}  // namespace

Vector spdc_pair_ket() {
  Vector v = Vector::Zero(16);
  v(kTopBottom) = 1.0 / std::numbers::sqrt2;
  v(kBottomTop) = 1.0 / std::numbers::sqrt2;
  return v;
}

PairState spdc_pair_state() { return PairState::from_pure(spdc_pair_ket()); }

PairState noisy_source(const SourceParams& params) {
  check_unit_interval(params.momentum_coherence, "source momentum coherence");
  check_unit_interval(params.white_noise, "source white-noise weight");

  Matrix rho = spdc_pair_state().rho();
  rho(kTopBottom, kBottomTop) *= params.momentum_coherence;
  rho(kBottomTop, kTopBottom) *= params.momentum_coherence;

  double p = params.white_noise;
  if (p < 1.0) {
    // Maximally mixed momentum, polarization still the |H_S V_I> product:
    // diagonal weight 1/4 on every (m_S, m_I) assignment.
    Matrix white = Matrix::Zero(16, 16);
    for (int ms = 0; ms < 2; ++ms)
      for (int mi = 0; mi < 2; ++mi)
        white(basis::pair_index(2 * ms + 0, 2 * mi + 1),
              basis::pair_index(2 * ms + 0, 2 * mi + 1)) = 0.25;
    rho = p * rho + (1.0 - p) * white;
  }
  return PairState::from_density(std::move(rho));
}

PhotonState classical_probe_state(double pol_angle) {
  Vector pol(2);
  pol << std::cos(pol_angle), std::sin(pol_angle);
  Vector mom(2);
  mom << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  return PhotonState(tensor(mom, pol));
}

}  // namespace sptq
