#pragma once

// Basis conventions and dense complex linear algebra for single-photon
// (4-dim) and photon-pair (16-dim) states.
//
// Single photon:  index = 2*m + p, momentum m in {T=0, B=1}, polarization
//                 p in {H=0, V=1}  (momentum-major). Basis order is
//                 TH, TV, BH, BV.
// Photon pair:    index = 4*s + i with s = signal photon index, i = idler
//                 photon index (signal is the left tensor factor).
//
// T and H carry logical 0; B and V carry logical 1. Every module in the
// project addresses amplitudes through these formulas; nothing else may
// define an ordering.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sptq/error.hpp"

namespace sptq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double algebra = 1e-12;     // Hermiticity, trace, unitarity
inline constexpr double eigenvalue = 1e-10;  // PSD slack on eigenvalues
inline constexpr double phase_free = 1e-10;  // phase-insensitive comparisons
}  // namespace tol

enum class Momentum : int { T = 0, B = 1 };
enum class Polarization : int { H = 0, V = 1 };
enum class Photon : int { Signal = 0, Idler = 1 };
enum class Dof : int { Momentum = 0, Polarization = 1 };

namespace basis {

constexpr int photon_index(Momentum m, Polarization p) {
  return 2 * static_cast<int>(m) + static_cast<int>(p);
}

constexpr int pair_index(int signal, int idler) { return 4 * signal + idler; }

}  // namespace basis

/// A pure single-photon state: 4 complex amplitudes, unit norm.
class PhotonState {
 public:
  explicit PhotonState(Vector amplitudes);
  static PhotonState basis_state(Momentum m, Polarization p);

  const Vector& amplitudes() const { return amp_; }
  Matrix density() const { return amp_ * amp_.adjoint(); }

 private:
  Vector amp_;
};

/// The signal-idler pair as a 16x16 density matrix. Construction validates
/// Hermiticity and unit trace within tol::algebra and positive
/// semidefiniteness within tol::eigenvalue.
class PairState {
 public:
  static PairState from_pure(const Vector& ket);
  static PairState from_density(Matrix rho);

  const Matrix& rho() const { return rho_; }

 private:
  explicit PairState(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

// Kronecker products in the conventions above. Output dimension is capped
// at 16; larger requests are rejected.
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

/// g (4x4) embedded on the pair: g (x) I4 for the signal, I4 (x) g for the idler.
Matrix embed_on_pair(Photon photon, const Matrix& g);

/// rho -> G rho G* with G = embed_on_pair(photon, g).
PairState apply_to_photon(const PairState& state, Photon photon, const Matrix& g);

/// rho -> sum_k K rho K* for a trace-preserving Kraus set of 4x4 operators.
PairState apply_kraus(const PairState& state, Photon photon,
                      const std::vector<Matrix>& kraus);

/// Reduced 4x4 density matrix of one photon.
Matrix partial_trace(const PairState& state, Photon keep);

/// Reduced 4x4 density matrix of one degree of freedom across both photons,
/// ordered (dof_signal, dof_idler).
Matrix reduce_pair_dof(const PairState& state, Dof keep);

/// Reduce a 4x4 single-photon density matrix to one 2x2 degree of freedom.
Matrix trace_out_dof(const Matrix& photon_rho, Dof keep);

/// <psi| rho |psi> for a normalized 16-dim ket.
double state_fidelity(const PairState& rho, const Vector& psi);

double purity(const Matrix& rho);
double von_neumann_entropy(const Matrix& rho);

/// Wootters concurrence of a 4x4 two-qubit density matrix.
double concurrence(const Matrix& two_qubit_rho);

bool is_hermitian(const Matrix& m, double tolerance = tol::algebra);
bool is_unitary(const Matrix& m, double tolerance = tol::algebra);
double min_eigenvalue(const Matrix& hermitian);

}  // namespace sptq
