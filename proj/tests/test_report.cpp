#include "sptq/report.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

using namespace sptq;
using nlohmann::json;
using testing::thrown_code;

namespace {

constexpr double kRoot2 = std::numbers::sqrt2;

std::string scenario_path(const char* name) {
  return std::string(SPTQ_SCENARIO_DIR) + "/" + name;
}

template <typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Visibility of an exact-count fit when a flat accidental floor is added:
// amplitude stays signal-only while the offset absorbs the floor.
double diluted(double v, double signal_offset_rate, double accidental) {
  return v * signal_offset_rate / (signal_offset_rate + accidental);
}

}  // namespace

TEST_CASE("exact sweep of the ideal scenario reports unit visibilities") {
  Scenario s;  // defaults: ideal parameters, two curves, 0..180 step 10
  json rep = run_experiment(s, true);
  validate_report(rep);

  CHECK(rep["report_type"] == "sweep");
  CHECK(rep["exact_mode"] == true);
  CHECK(rep["rng"]["algorithm"] == "splitmix64-ptrs");
  REQUIRE(rep["curves"].size() == 2);

  CHECK(rep["model"]["v0"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep["model"]["v45"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep["model"]["fidelity_to_target"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep["model"]["s_at_settings"].get<double>() ==
        doctest::Approx(2.0 * kRoot2).epsilon(1e-10));

  for (const json& curve : rep["curves"]) {
    double t1 = curve["theta1_deg"].get<double>() * std::numbers::pi / 180.0;
    REQUIRE(curve["points"].size() == 19);
    for (const json& pt : curve["points"]) {
      double t2 = pt["theta2_deg"].get<double>() * std::numbers::pi / 180.0;
      CHECK(pt["prob_exact"].get<double>() ==
            doctest::Approx(0.5 * std::pow(std::sin(t1 + t2), 2)).epsilon(1e-10));
      CHECK(pt["counts"].get<double>() ==
            doctest::Approx(4000.0 * pt["prob_exact"].get<double>())
                .epsilon(1e-10));
    }
    CHECK(curve["fit"]["visibility"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(rep["derived"]["v0_fit"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep["derived"]["v45_fit"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep["derived"]["v_c1_model"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep["derived"]["source_coherence_estimate"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact sweep of the replication scenario recovers its budget") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  json rep = run_experiment(s, true);
  validate_report(rep);

  const double v45 = 0.95 * 0.95 * 0.98;
  CHECK(rep["model"]["v45"].get<double>() == doctest::Approx(v45).epsilon(1e-12));
  CHECK(rep["model"]["v0"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  // Accidentals are enabled: rate 10/s on top of a 1000/s fringe offset, so
  // the fitted visibility carries the dilution while the model value does not.
  const double v45_fit = diluted(v45, 1000.0, 10.0);
  CHECK(rep["derived"]["v45_fit"].get<double>() ==
        doctest::Approx(v45_fit).epsilon(1e-9));
  CHECK(rep["derived"]["v_c1_model"].get<double>() ==
        doctest::Approx(0.95 * 0.98).epsilon(1e-12));
  CHECK(rep["derived"]["source_coherence_estimate"].get<double>() ==
        doctest::Approx(0.95 * 1000.0 / 1010.0).epsilon(1e-9));
}

TEST_CASE("exact CHSH report carries the model value with no error bar") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  s.measurement = MeasurementKind::Chsh;
  json rep = run_experiment(s, true);
  validate_report(rep);

  const double v45 = 0.95 * 0.95 * 0.98;
  CHECK(rep["chsh"]["s"].get<double>() ==
        doctest::Approx(kRoot2 * (1.0 + v45)).epsilon(1e-10));
  CHECK(rep["chsh"]["sigma_s"].get<double>() == 0.0);
  CHECK(rep["chsh"]["significance"].is_null());
  CHECK(rep["chsh"]["total_counts"].is_null());
  CHECK(rep["chsh"]["settings_deg"][0].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep["chsh"]["settings_deg"][2].get<double>() ==
        doctest::Approx(67.5).epsilon(1e-12));

  REQUIRE(rep.contains("chsh_optimized"));
  CHECK(rep["chsh_optimized"]["s_exact"].get<double>() ==
        doctest::Approx(2.0 * std::sqrt(1.0 + v45 * v45)).epsilon(1e-6));
}

TEST_CASE("sampled reports are bit-stable across repeated runs") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  json first = run_experiment(s, false);
  json second = run_experiment(s, false);
  CHECK(first.dump() == second.dump());
  validate_report(first);

  s.measurement = MeasurementKind::Chsh;
  json chsh_first = run_experiment(s, false);
  json chsh_second = run_experiment(s, false);
  CHECK(chsh_first.dump() == chsh_second.dump());
  CHECK(chsh_first["chsh"]["total_counts"].get<double>() > 0.0);
  CHECK(chsh_first["chsh"]["sigma_s"].get<double>() > 0.0);
  CHECK(chsh_first["chsh"]["significance"].is_number());
}

TEST_CASE("thread count does not change sampled results") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  setenv("SPTQ_SIM_THREADS", "1", 1);
  json serial = run_experiment(s, false);
  setenv("SPTQ_SIM_THREADS", "8", 1);
  json parallel = run_experiment(s, false);
  unsetenv("SPTQ_SIM_THREADS");
  CHECK(serial.dump() == parallel.dump());
}

TEST_CASE("sampled counts in sweep reports are whole numbers") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  json rep = run_experiment(s, false);
  for (const json& curve : rep["curves"]) {
    for (const json& pt : curve["points"]) {
      double c = pt["counts"].get<double>();
      CHECK(c == std::floor(c));
    }
  }
}

TEST_CASE("classical scenario reports both probe visibilities") {
  Scenario s = load_scenario(scenario_path("classical.json"));
  json rep = run_experiment(s, false);
  validate_report(rep);
  CHECK(rep["report_type"] == "classical_visibility");
  CHECK(rep["classical"]["v_c1"].get<double>() ==
        doctest::Approx(0.95 * 0.98).epsilon(1e-12));
  CHECK(rep["classical"]["v_c2"].get<double>() ==
        doctest::Approx(0.95).epsilon(1e-12));
  CHECK(rep["classical"]["ratio"].get<double>() ==
        doctest::Approx(0.98).epsilon(1e-12));
}

TEST_CASE("state report exposes purity, targets and amplitudes") {
  Scenario s;
  json rep = state_report(s);
  validate_report(rep);
  CHECK(rep["state"]["purity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep["state"]["momentum_purity"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep["state"]["polarization_concurrence"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep["state"]["fidelity_to_target"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep["state"]["amplitudes"].is_array());
  const json& amps = rep["state"]["amplitudes"];
  const double r = 1.0 / kRoot2;
  CHECK(amps[3][0].get<double>() == doctest::Approx(r).epsilon(1e-9));
  CHECK(amps[6][0].get<double>() == doctest::Approx(r).epsilon(1e-9));
  CHECK(std::abs(amps[3][1].get<double>()) < 1e-9);

  s.source.momentum_coherence = 0.95;
  json mixed = state_report(s);
  CHECK(mixed["state"]["fidelity_to_target"].get<double>() ==
        doctest::Approx(0.975).epsilon(1e-12));
  CHECK(mixed["state"]["amplitudes"].is_null());
}

TEST_CASE("report validation rejects tampered documents") {
  Scenario s = load_scenario(scenario_path("replication.json"));
  s.measurement = MeasurementKind::Chsh;
  json rep = run_experiment(s, true);

  json no_type = rep;
  no_type.erase("report_type");
  CHECK(thrown_code([&] { validate_report(no_type); }) == errc::schema);

  json bad_s = rep;
  bad_s["chsh"]["s"] = 3.2;
  CHECK(thrown_code([&] { validate_report(bad_s); }) == errc::schema);

  json bad_echo = rep;
  bad_echo["scenario"]["unknown_knob"] = 1;
  CHECK(thrown_code([&] { validate_report(bad_echo); }) == errc::schema);

  Scenario c = load_scenario(scenario_path("classical.json"));
  json classical = run_experiment(c, true);
  classical["classical"]["v_c1"] = 0.99;  // above v_c2 = 0.95
  CHECK(thrown_code([&] { validate_report(classical); }) == errc::schema);
}

TEST_CASE("scenario serialization round-trips every field") {
  Scenario s;
  s.source = {0.9, 0.97};
  s.gate = {0.93, 0.99};
  s.per_photon_gate_noise = true;
  s.variant = CircuitVariant::NoFinalMcnot;
  s.measurement = MeasurementKind::Chsh;
  s.experiment.pair_rate = 750.0;
  s.experiment.dwell = 2.5;
  s.experiment.seed = 123456;
  s.experiment.include_accidentals = true;
  s.sweep.theta1 = {0.0, std::numbers::pi / 6};
  s.chsh.settings = ChshSettings{0.1, 0.2, 0.3, 0.4};
  s.chsh.optimize = false;
  s.paths = {Momentum::B, Momentum::T};
  s.custom_circuit.push_back({Photon::Signal, parse_gate("swap")});
  s.custom_circuit.push_back({Photon::Idler, parse_gate("hwp(22.5)")});
  s.out_dir = "/tmp/somewhere";

  Scenario back = parse_scenario(scenario_to_json(s));
  CHECK(back.source.momentum_coherence == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(back.source.white_noise == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(back.gate.v_bs == doctest::Approx(0.93).epsilon(1e-12));
  CHECK(back.gate.v_dp == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(back.per_photon_gate_noise == true);
  CHECK(back.variant == CircuitVariant::NoFinalMcnot);
  CHECK(back.measurement == MeasurementKind::Chsh);
  CHECK(back.experiment.pair_rate == doctest::Approx(750.0).epsilon(1e-12));
  CHECK(back.experiment.dwell == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(back.experiment.seed == 123456);
  CHECK(back.experiment.include_accidentals == true);
  REQUIRE(back.sweep.theta1.size() == 2);
  CHECK(back.sweep.theta1[1] ==
        doctest::Approx(std::numbers::pi / 6).epsilon(1e-12));
  REQUIRE(back.chsh.settings.has_value());
  CHECK(back.chsh.settings->b_prime == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(back.chsh.optimize == false);
  CHECK(back.paths.signal == Momentum::B);
  CHECK(back.paths.idler == Momentum::T);
  REQUIRE(back.custom_circuit.size() == 2);
  CHECK(back.custom_circuit[0].gate.label == "swap");
  CHECK(back.custom_circuit[1].gate.label == "hwp(22.5)");
  CHECK(back.out_dir == "/tmp/somewhere");
}

TEST_CASE("scenario parse errors name the offending field") {
  CHECK(thrown_message([] {
          parse_scenario(json{{"sourcecoherence", 0.9}});
        }).find("sourcecoherence") != std::string::npos);
  CHECK(thrown_message([] {
          parse_scenario(json{{"experiment", {{"pair_rate", -5.0}}}});
        }).find("experiment.pair_rate") != std::string::npos);
  CHECK(thrown_message([] {
          parse_scenario(json{{"sweep", {{"theta2_step_deg", 0.0}}}});
        }).find("theta2_step_deg") != std::string::npos);
  CHECK(thrown_message([] {
          parse_scenario(json{{"chsh", {{"settings_deg", {1.0, 2.0, 3.0}}}}});
        }).find("settings_deg") != std::string::npos);
  CHECK(thrown_message([] {
          json j;
          j["circuit"] = json::array({json::array({"signal", "warp(3)"})});
          parse_scenario(j);
        }).find("circuit[0]") != std::string::npos);
  CHECK(thrown_code([] {
          parse_scenario(json{{"experiment", {{"seed", -1}}}});
        }) == errc::schema);
  CHECK(thrown_code([] {
          parse_scenario(json{{"experiment", {{"seed", 1.5}}}});
        }) == errc::schema);
  CHECK(thrown_code([] {
          parse_scenario(json{{"source_coherence", 1.2}});
        }) == errc::schema);
  CHECK(thrown_code([] { parse_scenario(json::array()); }) == errc::schema);
  CHECK(thrown_code([] { load_scenario("/nonexistent/sptq.json"); }) == errc::io);
}

TEST_CASE("write_outputs produces the report and one CSV per curve") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("sptq_report_test_" + std::to_string(::getpid()));
  fs::remove_all(dir);

  Scenario s;
  json rep = run_experiment(s, true);
  write_outputs(rep, dir.string());

  REQUIRE(fs::exists(dir / "report.json"));
  REQUIRE(fs::exists(dir / "sweep_theta1_0.csv"));
  REQUIRE(fs::exists(dir / "sweep_theta1_45.csv"));

  std::ifstream in(dir / "report.json");
  json reread = json::parse(in);
  CHECK(reread.dump() == rep.dump());

  std::ifstream csv(dir / "sweep_theta1_45.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "theta2_deg,counts,dwell_s,prob_exact");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 19);

  fs::remove_all(dir);
}
