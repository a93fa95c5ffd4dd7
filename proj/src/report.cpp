#include "sptq/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sptq/parallel.hpp"
#include "sptq/rng.hpp"

namespace sptq {

namespace {

using nlohmann::json;

constexpr double kDegree = std::numbers::pi / 180.0;

std::string format_number(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

json envelope(const Scenario& s, const char* type, bool exact) {
  return {
      {"report_type", type},
      {"exact_mode", exact},
      {"scenario", scenario_to_json(s)},
      {"rng", {{"algorithm", rng::kAlgorithm}, {"seed", s.experiment.seed}}},
  };
}

// Exact predictions of the prepared state, independent of sampling.
json model_block(const Scenario& s, const PairState& state) {
  return {
      {"v0", fringe_visibility_exact(state, 0.0, s.paths)},
      {"v45", fringe_visibility_exact(state, std::numbers::pi / 4, s.paths)},
      {"fidelity_to_target", state_fidelity(state, transfer_target_ket(s.variant))},
      {"s_at_settings", chsh_S(state, scenario_chsh_settings(s), s.paths)},
  };
}

json fit_to_json(const FitResult& f) {
  return {{"offset", f.offset},
          {"amplitude", f.amplitude},
          {"phase_deg", f.phase / kDegree},
          {"visibility", f.visibility},
          {"sigma_visibility", f.sigma_visibility},
          {"chi2", f.chi2}};
}

json settings_to_deg(const ChshSettings& c) {
  return {c.a / kDegree, c.a_prime / kDegree, c.b / kDegree, c.b_prime / kDegree};
}

json chsh_result(const ChshMeasurement& m) {
  json out = {{"s", m.s},
              {"sigma_s", m.sigma_s},
              {"correlations", m.correlations},
              {"sigmas", m.sigmas},
              {"total_counts", m.total_counts}};
  out["significance"] =
      m.sigma_s > 0.0 ? json((m.s - 2.0) / m.sigma_s) : json(nullptr);
  return out;
}

std::vector<double> theta2_grid(const SweepPlan& plan) {
  std::vector<double> grid;
  for (double t = plan.theta2_start; t <= plan.theta2_stop + 1e-12;
       t += plan.theta2_step) {
    grid.push_back(t);
  }
  return grid;
}

bool angle_matches_deg(double theta, double target_deg) {
  double deg = std::fmod(theta / kDegree, 180.0);
  if (deg < 0) deg += 180.0;
  return std::abs(deg - target_deg) < 1e-6;
}

json sweep_report(const Scenario& s, bool exact) {
  PairState state = prepare_state(s);
  json rep = envelope(s, "sweep", exact);
  rep["model"] = model_block(s, state);

  std::vector<double> theta1 = s.sweep.theta1;
  std::sort(theta1.begin(), theta1.end());
  const std::vector<double> grid = theta2_grid(s.sweep);

  json curves = json::array();
  json derived = {{"v0_fit", nullptr},
                  {"v45_fit", nullptr},
                  {"source_coherence_estimate", nullptr}};

  for (std::size_t curve_idx = 0; curve_idx < theta1.size(); ++curve_idx) {
    double t1 = theta1[curve_idx];
    std::vector<CountsRecord> records(grid.size());
    if (exact) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        records[i] = exact_counts(state, {t1, grid[i]}, s.experiment, s.paths);
      }
    } else {
      std::uint64_t base = curve_idx * grid.size();
      parallel_for(grid.size(), [&](std::size_t i) {
        records[i] =
            simulate_counts(state, {t1, grid[i]}, s.experiment, base + i, s.paths);
      });
    }

    json points = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      points.push_back(
          {{"theta2_deg", grid[i] / kDegree},
           {"counts", records[i].counts},
           {"dwell_s", records[i].dwell},
           {"prob_exact",
            coincidence_probability(state, {t1, grid[i]}, s.paths)}});
    }

    FitResult fit = fit_fringe(records);
    curves.push_back({{"theta1_deg", t1 / kDegree},
                      {"points", std::move(points)},
                      {"fit", fit_to_json(fit)}});

    if (angle_matches_deg(t1, 0.0)) derived["v0_fit"] = fit.visibility;
    if (angle_matches_deg(t1, 45.0)) derived["v45_fit"] = fit.visibility;
  }
  rep["curves"] = std::move(curves);

  double v_c1_model = classical_gate_visibility(s.gate, true);
  derived["v_c1_model"] = v_c1_model;
  if (derived["v45_fit"].is_number()) {
    // Exact-mode fits can land an ulp above the bound; absorb that before inverting.
    double v45 = derived["v45_fit"].get<double>();
    if (v45 > v_c1_model && v45 <= v_c1_model + tol::algebra) v45 = v_c1_model;
    try {
      derived["source_coherence_estimate"] = decompose_fidelity(v45, v_c1_model);
    } catch (const Error& e) {
      derived["budget_note"] = std::string(e.what());
    }
  } else {
    derived["budget_note"] = "no 45-degree curve in the sweep plan";
  }
  rep["derived"] = std::move(derived);
  return rep;
}

json chsh_report(const Scenario& s, bool exact) {
  PairState state = prepare_state(s);
  json rep = envelope(s, "chsh", exact);
  rep["model"] = model_block(s, state);

  ChshSettings settings = scenario_chsh_settings(s);
  json block = {{"settings_deg", settings_to_deg(settings)}};
  if (exact) {
    ChshMeasurement exact_m;
    exact_m.correlations = {
        correlation_E(state, settings.a, settings.b, s.paths),
        correlation_E(state, settings.a, settings.b_prime, s.paths),
        correlation_E(state, settings.a_prime, settings.b, s.paths),
        correlation_E(state, settings.a_prime, settings.b_prime, s.paths)};
    exact_m.s = exact_m.correlations[0] - exact_m.correlations[1] +
                exact_m.correlations[2] + exact_m.correlations[3];
    json r = chsh_result(exact_m);
    r["total_counts"] = nullptr;
    block.update(r);
  } else {
    block.update(chsh_result(measure_chsh(state, settings, s.experiment, s.paths)));
  }
  rep["chsh"] = std::move(block);

  if (s.chsh.optimize) {
    ChshOptimum opt = optimize_chsh(state, s.paths);
    json ob = {{"settings_deg", settings_to_deg(opt.settings)},
               {"s_exact", opt.s}};
    if (!exact) {
      // Stream indices 16..31; the primary measurement used 0..15.
      ob.update(chsh_result(
          measure_chsh(state, opt.settings, s.experiment, s.paths, 16)));
    }
    rep["chsh_optimized"] = std::move(ob);
  }
  return rep;
}

json classical_report(const Scenario& s) {
  json rep = envelope(s, "classical_visibility", true);
  double v_c1 = classical_gate_visibility(s.gate, true);
  double v_c2 = classical_gate_visibility(s.gate, false);
  json block = {{"v_c1", v_c1}, {"v_c2", v_c2}};
  block["ratio"] = v_c2 > 0.0 ? json(v_c1 / v_c2) : json(nullptr);
  rep["classical"] = std::move(block);
  return rep;
}

json complex_matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw Error(errc::schema, "report." + path + ": " + what);
}

}  // namespace

json run_experiment(const Scenario& s, bool exact) {
  switch (s.measurement) {
    case MeasurementKind::Sweep:
      return sweep_report(s, exact);
    case MeasurementKind::Chsh:
      return chsh_report(s, exact);
    case MeasurementKind::ClassicalVisibility:
      return classical_report(s);
  }
  throw Error(errc::schema, "unknown measurement kind");
}

json state_report(const Scenario& s) {
  PairState state = prepare_state(s);
  json rep = envelope(s, "state", true);
  rep["model"] = model_block(s, state);

  const Matrix& rho = state.rho();
  double pur = purity(rho);
  json st = {
      {"purity", pur},
      {"momentum_purity", purity(reduce_pair_dof(state, Dof::Momentum))},
      {"polarization_purity", purity(reduce_pair_dof(state, Dof::Polarization))},
      {"signal_purity", purity(partial_trace(state, Photon::Signal))},
      {"idler_purity", purity(partial_trace(state, Photon::Idler))},
      {"momentum_concurrence", concurrence(reduce_pair_dof(state, Dof::Momentum))},
      {"polarization_concurrence",
       concurrence(reduce_pair_dof(state, Dof::Polarization))},
      {"fidelity_to_target",
       state_fidelity(state, transfer_target_ket(s.variant))},
      {"density", complex_matrix_to_json(rho)},
  };

  st["amplitudes"] = nullptr;
  if (pur > 1.0 - 1e-9) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Vector ket = es.eigenvectors().col(15);
    // Fix the free global phase: largest amplitude real and positive.
    Eigen::Index imax = 0;
    ket.cwiseAbs().maxCoeff(&imax);
    Complex ph = ket(imax) / std::abs(ket(imax));
    ket /= ph;
    json amps = json::array();
    for (Eigen::Index i = 0; i < 16; ++i) {
      amps.push_back({ket(i).real(), ket(i).imag()});
    }
    st["amplitudes"] = std::move(amps);
  }
  rep["state"] = std::move(st);
  return rep;
}

void validate_report(const json& rep) {
  require(rep.is_object(), "", "must be an object");
  require(rep.contains("report_type") && rep["report_type"].is_string(),
          "report_type", "missing or not a string");
  const std::string type = rep["report_type"].get<std::string>();
  require(type == "sweep" || type == "chsh" || type == "classical_visibility" ||
              type == "state",
          "report_type", "unknown value '" + type + "'");
  require(rep.contains("exact_mode") && rep["exact_mode"].is_boolean(),
          "exact_mode", "missing or not a boolean");
  require(rep.contains("rng") && rep["rng"].is_object() &&
              rep["rng"].contains("algorithm") &&
              rep["rng"]["algorithm"].is_string(),
          "rng.algorithm", "missing or not a string");
  require(rep.contains("scenario"), "scenario", "missing");
  parse_scenario(rep["scenario"]);  // throws with its own field paths

  const double tsirelson = 2.0 * std::numbers::sqrt2 + 1e-9;
  if (type == "sweep") {
    require(rep.contains("curves") && rep["curves"].is_array() &&
                !rep["curves"].empty(),
            "curves", "missing or empty");
    for (const json& curve : rep["curves"]) {
      require(curve.contains("points") && curve["points"].is_array(),
              "curves.points", "missing");
      for (const json& pt : curve["points"]) {
        for (const char* key : {"theta2_deg", "counts", "dwell_s", "prob_exact"}) {
          require(pt.contains(key) && pt[key].is_number(),
                  std::string("curves.points.") + key, "missing or not a number");
        }
        require(pt["counts"].get<double>() >= 0.0, "curves.points.counts",
                "negative");
        double p = pt["prob_exact"].get<double>();
        require(p >= 0.0 && p <= 1.0, "curves.points.prob_exact",
                "outside [0,1]");
      }
      require(curve.contains("fit") && curve["fit"].contains("visibility"),
              "curves.fit", "missing");
    }
  } else if (type == "chsh") {
    require(rep.contains("chsh") && rep["chsh"].contains("s") &&
                rep["chsh"]["s"].is_number(),
            "chsh.s", "missing or not a number");
    require(std::abs(rep["chsh"]["s"].get<double>()) <= tsirelson, "chsh.s",
            "exceeds the Tsirelson bound");
    require(rep["chsh"].contains("sigma_s") &&
                rep["chsh"]["sigma_s"].get<double>() >= 0.0,
            "chsh.sigma_s", "missing or negative");
  } else if (type == "classical_visibility") {
    require(rep.contains("classical"), "classical", "missing");
    const json& c = rep["classical"];
    for (const char* key : {"v_c1", "v_c2"}) {
      require(c.contains(key) && c[key].is_number(), std::string("classical.") + key,
              "missing or not a number");
      double v = c[key].get<double>();
      require(v >= 0.0 && v <= 1.0, std::string("classical.") + key,
              "outside [0,1]");
    }
    require(c["v_c1"].get<double>() <= c["v_c2"].get<double>() + 1e-12,
            "classical.v_c1", "exceeds v_c2");
  } else {  // state
    require(rep.contains("state"), "state", "missing");
    const json& st = rep["state"];
    for (const char* key : {"purity", "fidelity_to_target"}) {
      require(st.contains(key) && st[key].is_number(), std::string("state.") + key,
              "missing or not a number");
      double v = st[key].get<double>();
      require(v >= 0.0 && v <= 1.0 + 1e-9, std::string("state.") + key,
              "outside [0,1]");
    }
    require(st.contains("density") && st["density"].is_array() &&
                st["density"].size() == 16,
            "state.density", "missing or wrong dimension");
  }
}

void write_outputs(const json& rep, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(errc::io, "cannot create output directory '" + out_dir +
                              "': " + ec.message());
  }

  const fs::path dir(out_dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) {
      throw Error(errc::io, "cannot write " + (dir / "report.json").string());
    }
    out << rep.dump(2) << '\n';
  }

  if (rep.value("report_type", "") != "sweep") return;
  for (const json& curve : rep.at("curves")) {
    double t1_deg = curve.at("theta1_deg").get<double>();
    fs::path csv = dir / ("sweep_theta1_" + format_number(t1_deg) + ".csv");
    std::ofstream out(csv);
    if (!out) {
      throw Error(errc::io, "cannot write " + csv.string());
    }
    out << "theta2_deg,counts,dwell_s,prob_exact\n";
    out << std::setprecision(17);
    for (const json& pt : curve.at("points")) {
      out << pt.at("theta2_deg").get<double>() << ','
          << pt.at("counts").get<double>() << ',' << pt.at("dwell_s").get<double>()
          << ',' << pt.at("prob_exact").get<double>() << '\n';
    }
  }
}

}  // namespace sptq
