#pragma once

// Polarization analyzers, momentum (path) selection, exact coincidence
// probabilities, correlation functions, and the CHSH combination with a
// numerical settings search.

#include <utility>
#include <vector>

#include "sptq/gates.hpp"
#include "sptq/hilbert.hpp"

namespace sptq {

/// Polarizer transmission-axis angles (radians from H) in the two arms.
struct AnalyzerSetting {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// The four analyzer angles of a CHSH measurement.
struct ChshSettings {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;
};

/// Which momentum mode each arm's iris passes. Defaults to the
/// deterministic post-transfer paths (signal top, idler bottom).
struct PathSelection {
  Momentum signal = Momentum::T;
  Momentum idler = Momentum::B;
};

/// Rank-1 projector onto cos t |H> + sin t |V>.
Matrix analyzer_projector(double theta);

/// Projector onto one momentum mode.
Matrix momentum_projector(Momentum path);

/// Tr[rho (P_path (x) P_theta1) (x) (P_path (x) P_theta2)], clamped to [0,1].
double coincidence_probability(const PairState& state, const AnalyzerSetting& s,
                               const PathSelection& paths = {});

/// [P(t1,t2) + P(t1+90,t2+90) - P(t1+90,t2) - P(t1,t2+90)] / (sum of four).
double correlation_E(const PairState& state, double theta1, double theta2,
                     const PathSelection& paths = {});

/// E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh_S(const PairState& state, const ChshSettings& s,
              const PathSelection& paths = {});

struct ChshOptimum {
  ChshSettings settings;
  double s = 0.0;
};

/// 5-degree grid scan over the four angles followed by coordinate descent;
/// the result is within 1e-6 of the best planar-analyzer S.
ChshOptimum optimize_chsh(const PairState& state, const PathSelection& paths = {});

/// The 22.5-degree settings family that maximizes S for the ideal output of
/// the given circuit variant.
ChshSettings standard_chsh_settings(CircuitVariant variant);

/// Pointwise coincidence_probability over a list of arm-2 angles.
std::vector<std::pair<double, double>> sweep_curve(
    const PairState& state, double theta1, const std::vector<double>& theta2_list,
    const PathSelection& paths = {});

/// Visibility (max-min)/(max+min) of the exact arm-2 fringe at fixed arm-1
/// angle, from the closed-form Fourier coefficients of the curve.
double fringe_visibility_exact(const PairState& state, double theta1,
                               const PathSelection& paths = {});

}  // namespace sptq
