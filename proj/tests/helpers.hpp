#pragma once

// Shared test utilities: deterministic random states, operators and
// channels built straight from the seeded stream so oracles never depend on
// library internals under test.

#include <cmath>
#include <numbers>

#include "sptq/hilbert.hpp"
#include "sptq/rng.hpp"

namespace sptq::testing {

inline Complex random_gauss(rng::Stream& s) { return {s.normal(), s.normal()}; }

inline Matrix ginibre(rng::Stream& s, int dim) {
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = random_gauss(s);
  return g;
}

/// Random full-rank density matrix, GG*/Tr(GG*).
inline Matrix random_density(rng::Stream& s, int dim) {
  Matrix g = ginibre(s, dim);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

/// Haar-ish random unitary via QR of a Ginibre matrix with phase fixing.
inline Matrix random_unitary(rng::Stream& s, int dim) {
  Matrix g = ginibre(s, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline Vector random_ket(rng::Stream& s, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = random_gauss(s);
  v.normalize();
  return v;
}

inline double random_angle(rng::Stream& s) {
  return s.uniform() * std::numbers::pi;
}

/// The error code thrown by f, or "" if it did not throw an sptq::Error.
template <typename F>
std::string thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace sptq::testing
