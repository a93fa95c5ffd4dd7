#include "sptq/experiment.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "sptq/rng.hpp"

namespace sptq {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void validate(const ExperimentConfig& cfg) {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(errc::range,
                  std::string(name) + " must be finite and nonnegative");
    }
  };
  nonneg(cfg.pair_rate, "pair_rate");
  nonneg(cfg.singles_rate_1, "singles_rate_1");
  nonneg(cfg.singles_rate_2, "singles_rate_2");
  nonneg(cfg.window, "window");
  nonneg(cfg.dwell, "dwell");
  if (cfg.include_accidentals && cfg.window <= 0.0) {
    throw Error(errc::range, "window must be positive when accidentals are on");
  }
}

struct WlsFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
};

// Weighted least squares with weights 1/max(counts,1); features(theta)
// supplies one design-matrix row per record.
template <typename Features>
WlsFit weighted_fit(const std::vector<CountsRecord>& data, int n_params,
                    Features features) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_params, n_params);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_params);
  for (const CountsRecord& rec : data) {
    double w = 1.0 / std::max(rec.counts, 1.0);
    Eigen::VectorXd x = features(rec.setting.theta2);
    m += w * x * x.transpose();
    rhs += w * x * rec.counts;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    throw Error(errc::underdetermined, "fringe fit design matrix is singular");
  }
  WlsFit fit;
  fit.beta = lu.solve(rhs);
  fit.covariance = lu.inverse();
  for (const CountsRecord& rec : data) {
    double w = 1.0 / std::max(rec.counts, 1.0);
    double r = rec.counts - features(rec.setting.theta2).dot(fit.beta);
    fit.chi2 += w * r * r;
  }
  return fit;
}

}  // namespace

double accidental_rate(const ExperimentConfig& cfg) {
  validate(cfg);
  return cfg.singles_rate_1 * cfg.singles_rate_2 * cfg.window;
}

double expected_rate(const PairState& state, const AnalyzerSetting& setting,
                     const ExperimentConfig& cfg, const PathSelection& paths) {
  validate(cfg);
  double rate = 2.0 * cfg.pair_rate * coincidence_probability(state, setting, paths);
  if (cfg.include_accidentals) rate += accidental_rate(cfg);
  return rate;
}

CountsRecord exact_counts(const PairState& state, const AnalyzerSetting& setting,
                          const ExperimentConfig& cfg, const PathSelection& paths) {
  return {setting, cfg.dwell * expected_rate(state, setting, cfg, paths), cfg.dwell};
}

CountsRecord simulate_counts(const PairState& state, const AnalyzerSetting& setting,
                             const ExperimentConfig& cfg,
                             std::uint64_t setting_index,
                             const PathSelection& paths) {
  double mean = cfg.dwell * expected_rate(state, setting, cfg, paths);
  rng::Stream stream = rng::Stream::for_setting(cfg.seed, setting_index);
  return {setting, static_cast<double>(stream.poisson(mean)), cfg.dwell};
}

FitResult fit_fringe(const std::vector<CountsRecord>& data) {
  if (data.size() < 5) {
    throw Error(errc::underdetermined, "fringe fit needs at least 5 settings");
  }
  std::set<long> distinct;
  double lo = data.front().setting.theta2;
  double hi = lo;
  for (const CountsRecord& rec : data) {
    double t = rec.setting.theta2;
    // Distinctness is judged mod pi (the fringe period) at nanoradian grain.
    double folded = std::fmod(t, std::numbers::pi);
    if (folded < 0) folded += std::numbers::pi;
    distinct.insert(std::lround(folded * 1e9));
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (distinct.size() < 3) {
    throw Error(errc::underdetermined, "fringe fit needs at least 3 distinct angles");
  }
  if (hi - lo < kHalfPi - 1e-9) {
    throw Error(errc::underdetermined,
                "fringe fit needs angles spanning at least half a period");
  }

  WlsFit fit = weighted_fit(data, 3, [](double t) {
    Eigen::Vector3d x(1.0, std::cos(2 * t), std::sin(2 * t));
    return Eigen::VectorXd(x);
  });

  double offset = fit.beta(0);
  double alpha = fit.beta(1);
  double beta = fit.beta(2);
  if (offset <= 0.0) {
    throw Error(errc::degenerate, "fringe fit offset is not positive");
  }

  // A fringe with period 90 degrees instead of 180 indicates data produced
  // under a mismatched basis convention; refuse to report a visibility for
  // it. Tested by adding cos/sin 4t terms and comparing amplitudes.
  if (distinct.size() >= 5) {
    WlsFit wide = weighted_fit(data, 5, [](double t) {
      Eigen::VectorXd x(5);
      x << 1.0, std::cos(2 * t), std::sin(2 * t), std::cos(4 * t), std::sin(4 * t);
      return x;
    });
    double r180 = std::hypot(wide.beta(1), wide.beta(2));
    double r90 = std::hypot(wide.beta(3), wide.beta(4));
    double var_r90 = 0.0;
    if (r90 > 0.0) {
      Eigen::Vector2d g(wide.beta(3) / r90, wide.beta(4) / r90);
      var_r90 = g.dot(wide.covariance.block<2, 2>(3, 3) * g);
    }
    if (r90 > r180 && r90 > 5.0 * std::sqrt(std::max(var_r90, 0.0))) {
      throw Error(errc::degenerate,
                  "fringe is dominated by a 90-degree period component");
    }
  }

  FitResult result;
  result.offset = offset;
  result.amplitude = std::hypot(alpha, beta);
  result.phase = 0.5 * std::atan2(beta, alpha);
  result.visibility = result.amplitude / offset;
  result.chi2 = fit.chi2;

  // sigma_V from the gradient of V = sqrt(a^2 + b^2)/offset. At a zero
  // amplitude the gradient direction is undefined; fall back to the raw
  // quadrature uncertainty of the two amplitude components.
  Eigen::Vector3d g;
  if (result.amplitude > 1e-300) {
    g << -result.visibility / offset, alpha / (result.amplitude * offset),
        beta / (result.amplitude * offset);
    result.sigma_visibility = std::sqrt(g.dot(fit.covariance * g));
  } else {
    result.sigma_visibility =
        std::sqrt(fit.covariance(1, 1) + fit.covariance(2, 2)) / offset;
  }
  return result;
}

ChshMeasurement measure_chsh(const PairState& state, const ChshSettings& s,
                             const ExperimentConfig& cfg,
                             const PathSelection& paths,
                             std::uint64_t stream_base) {
  const std::array<AnalyzerSetting, 4> pairs = {
      AnalyzerSetting{s.a, s.b}, AnalyzerSetting{s.a, s.b_prime},
      AnalyzerSetting{s.a_prime, s.b}, AnalyzerSetting{s.a_prime, s.b_prime}};
  // Orientation order (t1,t2), (t1,t2+90), (t1+90,t2), (t1+90,t2+90) with
  // correlation signs +,-,-,+.
  const std::array<double, 4> sign = {1.0, -1.0, -1.0, 1.0};

  ChshMeasurement out;
  for (std::size_t k = 0; k < 4; ++k) {
    std::array<double, 4> n{};
    double total = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      AnalyzerSetting orient = pairs[k];
      if (j == 1 || j == 3) orient.theta2 += kHalfPi;
      if (j == 2 || j == 3) orient.theta1 += kHalfPi;
      n[j] = simulate_counts(state, orient, cfg, stream_base + 4 * k + j, paths)
                 .counts;
      total += n[j];
    }
    if (total <= 0.0) {
      throw Error(errc::degenerate, "no coincidences recorded for a CHSH setting");
    }
    double e = 0.0;
    for (std::size_t j = 0; j < 4; ++j) e += sign[j] * n[j];
    e /= total;
    double var = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      var += n[j] * (sign[j] - e) * (sign[j] - e);
    var /= total * total;
    out.correlations[k] = e;
    out.sigmas[k] = std::sqrt(var);
    out.total_counts += total;
  }
  out.s = out.correlations[0] - out.correlations[1] + out.correlations[2] +
          out.correlations[3];
  out.sigma_s = std::sqrt(out.sigmas[0] * out.sigmas[0] +
                          out.sigmas[1] * out.sigmas[1] +
                          out.sigmas[2] * out.sigmas[2] +
                          out.sigmas[3] * out.sigmas[3]);
  return out;
}

}  // namespace sptq
