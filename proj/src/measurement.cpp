#include "sptq/measurement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace sptq {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Matrix pair_projector(const AnalyzerSetting& s, const PathSelection& paths) {
  Matrix signal = tensor(momentum_projector(paths.signal), analyzer_projector(s.theta1));
  Matrix idler = tensor(momentum_projector(paths.idler), analyzer_projector(s.theta2));
  return tensor(signal, idler);
}

// E(theta1, theta2) is bilinear in (cos 2t, sin 2t) of each arm once the
// path projectors are fixed:
//   E = f(theta1)^T T f(theta2),  f(t) = (cos 2t, sin 2t).
// The 2x2 matrix T is recovered from E at the four probe angle pairs
// {0, 45 deg}^2 and makes grid scans and per-coordinate maximization exact.
struct BilinearE {
  Eigen::Matrix2d t;

  static BilinearE from_state(const PairState& state, const PathSelection& paths) {
    const double q = std::numbers::pi / 4.0;
    BilinearE b;
    b.t << correlation_E(state, 0, 0, paths), correlation_E(state, 0, q, paths),
        correlation_E(state, q, 0, paths), correlation_E(state, q, q, paths);
    return b;
  }

  double e(double theta1, double theta2) const {
    Eigen::Vector2d f1(std::cos(2 * theta1), std::sin(2 * theta1));
    Eigen::Vector2d f2(std::cos(2 * theta2), std::sin(2 * theta2));
    return f1.dot(t * f2);
  }

  double s(const ChshSettings& c) const {
    return e(c.a, c.b) - e(c.a, c.b_prime) + e(c.a_prime, c.b) +
           e(c.a_prime, c.b_prime);
  }
};

}  // namespace

Matrix analyzer_projector(double theta) {
  Vector axis(2);
  axis << std::cos(theta), std::sin(theta);
  return axis * axis.adjoint();
}

Matrix momentum_projector(Momentum path) {
  Matrix m = Matrix::Zero(2, 2);
  m(static_cast<int>(path), static_cast<int>(path)) = 1.0;
  return m;
}

double coincidence_probability(const PairState& state, const AnalyzerSetting& s,
                               const PathSelection& paths) {
  double p = (state.rho() * pair_projector(s, paths)).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

double correlation_E(const PairState& state, double theta1, double theta2,
                     const PathSelection& paths) {
  double p00 = coincidence_probability(state, {theta1, theta2}, paths);
  double p01 = coincidence_probability(state, {theta1, theta2 + kHalfPi}, paths);
  double p10 = coincidence_probability(state, {theta1 + kHalfPi, theta2}, paths);
  double p11 =
      coincidence_probability(state, {theta1 + kHalfPi, theta2 + kHalfPi}, paths);
  double total = p00 + p01 + p10 + p11;
  if (total < 1e-15) {
    throw Error(errc::degenerate,
                "no coincidence weight in the selected momentum modes");
  }
  return (p00 + p11 - p01 - p10) / total;
}

double chsh_S(const PairState& state, const ChshSettings& s,
              const PathSelection& paths) {
  return correlation_E(state, s.a, s.b, paths) -
         correlation_E(state, s.a, s.b_prime, paths) +
         correlation_E(state, s.a_prime, s.b, paths) +
         correlation_E(state, s.a_prime, s.b_prime, paths);
}

ChshOptimum optimize_chsh(const PairState& state, const PathSelection& paths) {
  BilinearE model = BilinearE::from_state(state, paths);

  // Coarse scan, 5-degree steps over half a turn (E has period 180 deg).
  constexpr int kSteps = 36;
  std::array<double, kSteps> angle;
  Eigen::Matrix<double, kSteps, kSteps> etab;
  for (int i = 0; i < kSteps; ++i)
    angle[i] = i * std::numbers::pi / kSteps;
  for (int i = 0; i < kSteps; ++i)
    for (int j = 0; j < kSteps; ++j) etab(i, j) = model.e(angle[i], angle[j]);

  ChshSettings best;
  double best_s = -std::numeric_limits<double>::infinity();
  for (int ib = 0; ib < kSteps; ++ib) {
    for (int ibp = 0; ibp < kSteps; ++ibp) {
      int best_a = 0, best_ap = 0;
      double va = -std::numeric_limits<double>::infinity();
      double vap = -std::numeric_limits<double>::infinity();
      for (int ia = 0; ia < kSteps; ++ia) {
        double diff = etab(ia, ib) - etab(ia, ibp);
        double sum = etab(ia, ib) + etab(ia, ibp);
        if (diff > va) {
          va = diff;
          best_a = ia;
        }
        if (sum > vap) {
          vap = sum;
          best_ap = ia;
        }
      }
      if (va + vap > best_s) {
        best_s = va + vap;
        best = {angle[best_a], angle[best_ap], angle[ib], angle[ibp]};
      }
    }
  }

  // Coordinate descent with exact single-angle maximization: with three
  // angles fixed, S(t) = A + B cos 2t + C sin 2t, recovered from probes at
  // t in {0, 45, 90} degrees.
  auto refine = [&model](ChshSettings& s, double ChshSettings::* coord) {
    ChshSettings probe = s;
    probe.*coord = 0.0;
    double s0 = model.s(probe);
    probe.*coord = std::numbers::pi / 4.0;
    double s45 = model.s(probe);
    probe.*coord = kHalfPi;
    double s90 = model.s(probe);
    double a = (s0 + s90) / 2.0;
    double b = (s0 - s90) / 2.0;
    double c = s45 - a;
    s.*coord = 0.5 * std::atan2(c, b);
    return a + std::hypot(b, c);
  };

  double current = best_s;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double updated = current;
    for (double ChshSettings::* coord :
         {&ChshSettings::a, &ChshSettings::a_prime, &ChshSettings::b,
          &ChshSettings::b_prime}) {
      updated = refine(best, coord);
    }
    if (updated - current < 1e-12) {
      current = updated;
      break;
    }
    current = updated;
  }
  return {best, current};
}

ChshSettings standard_chsh_settings(CircuitVariant variant) {
  const double d = std::numbers::pi / 180.0;
  if (variant == CircuitVariant::FullSwap) {
    return {0.0, 45.0 * d, 67.5 * d, 22.5 * d};
  }
  return {0.0, 45.0 * d, 22.5 * d, 67.5 * d};
}

std::vector<std::pair<double, double>> sweep_curve(
    const PairState& state, double theta1, const std::vector<double>& theta2_list,
    const PathSelection& paths) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(theta2_list.size());
  for (double theta2 : theta2_list) {
    curve.emplace_back(theta2,
                       coincidence_probability(state, {theta1, theta2}, paths));
  }
  return curve;
}

double fringe_visibility_exact(const PairState& state, double theta1,
                               const PathSelection& paths) {
  // P(t2) = A + B cos 2t2 + C sin 2t2; recover the coefficients from three
  // probes, then V = sqrt(B^2 + C^2) / A.
  double p0 = coincidence_probability(state, {theta1, 0.0}, paths);
  double p45 = coincidence_probability(state, {theta1, std::numbers::pi / 4}, paths);
  double p90 = coincidence_probability(state, {theta1, kHalfPi}, paths);
  double a = (p0 + p90) / 2.0;
  double b = (p0 - p90) / 2.0;
  double c = p45 - a;
  if (a < 1e-15) {
    throw Error(errc::degenerate, "fringe has no mean intensity");
  }
  return std::hypot(b, c) / a;
}

}  // namespace sptq
