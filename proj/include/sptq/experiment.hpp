#pragma once

// Monte-Carlo coincidence counting with Poisson statistics, sinusoidal
// fringe fitting with visibility uncertainty, and the sampled CHSH
// measurement with its standard error.

#include <array>
#include <cstdint>
#include <vector>

#include "sptq/measurement.hpp"

namespace sptq {

struct ExperimentConfig {
  double pair_rate = 2000.0;      // detected pairs/s with analyzers removed
  double singles_rate_1 = 1e5;    // counts/s in arm 1
  double singles_rate_2 = 1e5;    // counts/s in arm 2
  double window = 1e-9;           // coincidence window, seconds
  double dwell = 1.0;             // seconds per setting
  std::uint64_t seed = 1;
  bool include_accidentals = false;
};

/// One dwell at one analyzer setting. counts is integral when sampled and
/// real-valued when it carries an exact expected rate.
struct CountsRecord {
  AnalyzerSetting setting;
  double counts = 0.0;
  double dwell = 0.0;
};

struct FitResult {
  double offset = 0.0;     // counts
  double amplitude = 0.0;  // counts
  double phase = 0.0;      // radians
  double visibility = 0.0;
  double sigma_visibility = 0.0;
  double chi2 = 0.0;
};

/// Uncorrelated-click coincidence rate: singles_1 * singles_2 * window.
double accidental_rate(const ExperimentConfig& cfg);

/// Expected coincidence rate (counts/s) at one setting. The factor 2 on
/// pair_rate normalizes the two orthogonal analyzer outcomes to sum to the
/// analyzer-free rate.
double expected_rate(const PairState& state, const AnalyzerSetting& setting,
                     const ExperimentConfig& cfg, const PathSelection& paths = {});

/// Expected counts over one dwell, without sampling.
CountsRecord exact_counts(const PairState& state, const AnalyzerSetting& setting,
                          const ExperimentConfig& cfg,
                          const PathSelection& paths = {});

/// One Poisson draw over one dwell. The RNG stream is derived from
/// (cfg.seed, setting_index), so settings can be sampled in any order or in
/// parallel with identical results.
CountsRecord simulate_counts(const PairState& state, const AnalyzerSetting& setting,
                             const ExperimentConfig& cfg,
                             std::uint64_t setting_index = 0,
                             const PathSelection& paths = {});

/// Weighted least squares of C(t2) = offset + alpha cos 2t2 + beta sin 2t2
/// with Poisson weights 1/max(counts, 1); visibility = sqrt(a^2+b^2)/offset
/// with its uncertainty from first-order covariance propagation.
FitResult fit_fringe(const std::vector<CountsRecord>& data);

struct ChshMeasurement {
  double s = 0.0;
  double sigma_s = 0.0;
  // In setting order (a,b), (a,b'), (a',b), (a',b').
  std::array<double, 4> correlations{};
  std::array<double, 4> sigmas{};
  double total_counts = 0.0;
};

/// Sample the 16 coincidence counts (4 setting pairs x 4 analyzer-pair
/// orientations), form each E with its Poisson standard error, and combine
/// in quadrature. stream_base offsets the per-count RNG stream indices so
/// several measurements under one seed stay independent.
ChshMeasurement measure_chsh(const PairState& state, const ChshSettings& s,
                             const ExperimentConfig& cfg,
                             const PathSelection& paths = {},
                             std::uint64_t stream_base = 0);

}  // namespace sptq
