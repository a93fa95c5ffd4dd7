#include "sptq/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sptq {

namespace {

void require_dim(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                 const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(errc::dimension, std::string(what) + ": expected " +
                                     std::to_string(rows) + "x" +
                                     std::to_string(cols) + ", got " +
                                     std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
  }
}

void require_dim(const Vector& v, Eigen::Index size, const char* what) {
  if (v.size() != size) {
    throw Error(errc::dimension, std::string(what) + ": expected length " +
                                     std::to_string(size) + ", got " +
                                     std::to_string(v.size()));
  }
}

}  // namespace

PhotonState::PhotonState(Vector amplitudes) : amp_(std::move(amplitudes)) {
  require_dim(amp_, 4, "photon state");
  if (std::abs(amp_.norm() - 1.0) > tol::algebra) {
    throw Error(errc::state, "photon state is not normalized");
  }
}

PhotonState PhotonState::basis_state(Momentum m, Polarization p) {
  Vector v = Vector::Zero(4);
  v(basis::photon_index(m, p)) = 1.0;
  return PhotonState(std::move(v));
}

PairState PairState::from_pure(const Vector& ket) {
  require_dim(ket, 16, "pair ket");
  double n = ket.norm();
  if (std::abs(n - 1.0) > tol::algebra) {
    throw Error(errc::state, "pair ket is not normalized");
  }
  return PairState(ket * ket.adjoint());
}

PairState PairState::from_density(Matrix rho) {
  require_dim(rho, 16, 16, "pair density");
  if (!is_hermitian(rho)) {
    throw Error(errc::state, "pair density is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > tol::algebra ||
      std::abs(rho.trace().imag()) > tol::algebra) {
    throw Error(errc::state, "pair density trace is not 1");
  }
  if (min_eigenvalue(rho) < -tol::eigenvalue) {
    throw Error(errc::state, "pair density has a negative eigenvalue");
  }
  return PairState(std::move(rho));
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw Error(errc::dimension, "tensor: factors must be square");
  }
  Eigen::Index n = a.rows() * b.rows();
  if (n > 16) {
    throw Error(errc::dimension, "tensor: product dimension exceeds 16");
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Eigen::Index n = a.size() * b.size();
  if (n > 16) {
    throw Error(errc::dimension, "tensor: product dimension exceeds 16");
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix embed_on_pair(Photon photon, const Matrix& g) {
  require_dim(g, 4, 4, "photon operator");
  Matrix id = Matrix::Identity(4, 4);
  return photon == Photon::Signal ? tensor(g, id) : tensor(id, g);
}

PairState apply_to_photon(const PairState& state, Photon photon,
                          const Matrix& g) {
  Matrix big = embed_on_pair(photon, g);
  return PairState::from_density(big * state.rho() * big.adjoint());
}

PairState apply_kraus(const PairState& state, Photon photon,
                      const std::vector<Matrix>& kraus) {
  if (kraus.empty()) {
    throw Error(errc::state, "empty Kraus set");
  }
  Matrix sum = Matrix::Zero(4, 4);
  for (const Matrix& k : kraus) {
    require_dim(k, 4, 4, "Kraus operator");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > tol::algebra) {
    throw Error(errc::state, "Kraus set is not trace preserving");
  }
  Matrix out = Matrix::Zero(16, 16);
  for (const Matrix& k : kraus) {
    Matrix big = embed_on_pair(photon, k);
    out += big * state.rho() * big.adjoint();
  }
  return PairState::from_density(std::move(out));
}

Matrix partial_trace(const PairState& state, Photon keep) {
  const Matrix& rho = state.rho();
  Matrix out = Matrix::Zero(4, 4);
  if (keep == Photon::Signal) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 4; ++k)
          out(a, b) += rho(basis::pair_index(a, k), basis::pair_index(b, k));
  } else {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 4; ++k)
          out(a, b) += rho(basis::pair_index(k, a), basis::pair_index(k, b));
  }
  return out;
}

Matrix reduce_pair_dof(const PairState& state, Dof keep) {
  const Matrix& rho = state.rho();
  // Pair index = 8 m_S + 4 p_S + 2 m_I + p_I. Keep one (signal, idler)
  // qubit pair, trace the other.
  auto full = [](int kept_s, int kept_i, int other_s, int other_i, Dof keep_dof) {
    int ms, ps, mi, pi;
    if (keep_dof == Dof::Momentum) {
      ms = kept_s;
      mi = kept_i;
      ps = other_s;
      pi = other_i;
    } else {
      ps = kept_s;
      pi = kept_i;
      ms = other_s;
      mi = other_i;
    }
    return basis::pair_index(2 * ms + ps, 2 * mi + pi);
  };
  Matrix out = Matrix::Zero(4, 4);
  for (int rs = 0; rs < 2; ++rs)
    for (int ri = 0; ri < 2; ++ri)
      for (int cs = 0; cs < 2; ++cs)
        for (int ci = 0; ci < 2; ++ci)
          for (int os = 0; os < 2; ++os)
            for (int oi = 0; oi < 2; ++oi)
              out(2 * rs + ri, 2 * cs + ci) +=
                  rho(full(rs, ri, os, oi, keep), full(cs, ci, os, oi, keep));
  return out;
}

Matrix trace_out_dof(const Matrix& photon_rho, Dof keep) {
  require_dim(photon_rho, 4, 4, "photon density");
  Matrix out = Matrix::Zero(2, 2);
  // Photon index = 2 m + p.
  auto idx = [keep](int kept, int other) {
    return keep == Dof::Momentum ? 2 * kept + other : 2 * other + kept;
  };
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int o = 0; o < 2; ++o) out(r, c) += photon_rho(idx(r, o), idx(c, o));
  return out;
}

double state_fidelity(const PairState& rho, const Vector& psi) {
  require_dim(psi, 16, "reference ket");
  if (std::abs(psi.norm() - 1.0) > tol::algebra) {
    throw Error(errc::state, "reference ket is not normalized");
  }
  Complex f = psi.adjoint() * rho.rho() * psi;
  return f.real();
}

double purity(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw Error(errc::dimension, "purity: matrix must be square");
  }
  return (rho * rho).trace().real();
}

double von_neumann_entropy(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw Error(errc::dimension, "entropy: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam > tol::eigenvalue) s -= lam * std::log2(lam);
  }
  return s;
}

double concurrence(const Matrix& two_qubit_rho) {
  require_dim(two_qubit_rho, 4, 4, "concurrence input");
  Matrix y(2, 2);
  y << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  Matrix yy = tensor(y, y);
  Matrix r = two_qubit_rho * yy * two_qubit_rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix> es(r, false);
  std::vector<double> lam(4);
  for (int i = 0; i < 4; ++i)
    lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_unitary(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  Matrix prod = m.adjoint() * m;
  return (prod - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
         tolerance;
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace sptq
