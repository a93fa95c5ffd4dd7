#include "sptq/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace sptq {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(errc::schema, path + ": " + what);
}

void expect_known_keys(const json& obj, const std::string& path,
                       const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      schema_error(path.empty() ? key : path + "." + key, "unexpected field");
    }
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) schema_error(path + key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) schema_error(path + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) schema_error(path + key, "expected a string");
  return v.get<std::string>();
}

Photon parse_photon(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected \"signal\" or \"idler\"");
  std::string s = v.get<std::string>();
  if (s == "signal") return Photon::Signal;
  if (s == "idler") return Photon::Idler;
  schema_error(path, "expected \"signal\" or \"idler\", got \"" + s + "\"");
}

Momentum parse_path(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected \"T\" or \"B\"");
  std::string s = v.get<std::string>();
  if (s == "T") return Momentum::T;
  if (s == "B") return Momentum::B;
  schema_error(path, "expected \"T\" or \"B\", got \"" + s + "\"");
}

}  // namespace

SweepPlan::SweepPlan()
    : theta1{0.0, 45.0 * kDegree},
      theta2_start(0.0),
      theta2_stop(180.0 * kDegree),
      theta2_step(10.0 * kDegree) {}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) {
    throw Error(errc::schema, "scenario must be a JSON object");
  }
  expect_known_keys(j, "",
                    {"source_coherence", "source_white_noise", "gate_bs_coherence",
                     "gate_dove_coherence", "per_photon_gate_noise",
                     "circuit_variant", "measurement", "experiment", "sweep",
                     "chsh", "paths", "circuit", "out_dir"});

  Scenario s;
  s.source.momentum_coherence = get_number(j, "", "source_coherence", 1.0);
  s.source.white_noise = get_number(j, "", "source_white_noise", 1.0);
  s.gate.v_bs = get_number(j, "", "gate_bs_coherence", 1.0);
  s.gate.v_dp = get_number(j, "", "gate_dove_coherence", 1.0);
  s.per_photon_gate_noise = get_bool(j, "", "per_photon_gate_noise", false);

  for (const char* key :
       {"source_coherence", "source_white_noise", "gate_bs_coherence",
        "gate_dove_coherence"}) {
    double v = get_number(j, "", key, 1.0);
    if (!(v >= 0.0 && v <= 1.0)) schema_error(key, "must lie in [0,1]");
  }

  std::string variant = get_string(j, "", "circuit_variant", "full_swap");
  if (variant == "full_swap") {
    s.variant = CircuitVariant::FullSwap;
  } else if (variant == "no_final_mcnot") {
    s.variant = CircuitVariant::NoFinalMcnot;
  } else {
    schema_error("circuit_variant",
                 "expected \"full_swap\" or \"no_final_mcnot\", got \"" + variant +
                     "\"");
  }

  std::string meas = get_string(j, "", "measurement", "sweep");
  if (meas == "sweep") {
    s.measurement = MeasurementKind::Sweep;
  } else if (meas == "chsh") {
    s.measurement = MeasurementKind::Chsh;
  } else if (meas == "classical_visibility") {
    s.measurement = MeasurementKind::ClassicalVisibility;
  } else {
    schema_error("measurement",
                 "expected \"sweep\", \"chsh\" or \"classical_visibility\", got \"" +
                     meas + "\"");
  }

  if (j.contains("experiment")) {
    const json& e = j.at("experiment");
    if (!e.is_object()) schema_error("experiment", "expected an object");
    expect_known_keys(e, "experiment",
                      {"pair_rate", "singles_rate_1", "singles_rate_2", "window",
                       "dwell", "seed", "include_accidentals"});
    const std::string p = "experiment.";
    s.experiment.pair_rate = get_number(e, p, "pair_rate", s.experiment.pair_rate);
    s.experiment.singles_rate_1 =
        get_number(e, p, "singles_rate_1", s.experiment.singles_rate_1);
    s.experiment.singles_rate_2 =
        get_number(e, p, "singles_rate_2", s.experiment.singles_rate_2);
    s.experiment.window = get_number(e, p, "window", s.experiment.window);
    s.experiment.dwell = get_number(e, p, "dwell", s.experiment.dwell);
    s.experiment.include_accidentals =
        get_bool(e, p, "include_accidentals", s.experiment.include_accidentals);
    if (e.contains("seed")) {
      const json& v = e.at("seed");
      if (!v.is_number_unsigned()) {
        schema_error("experiment.seed", "expected an unsigned integer");
      }
      s.experiment.seed = v.get<std::uint64_t>();
    }
    for (const char* key :
         {"pair_rate", "singles_rate_1", "singles_rate_2", "window", "dwell"}) {
      if (e.contains(key) && !(e.at(key).get<double>() >= 0.0)) {
        schema_error(p + key, "expected a nonnegative number");
      }
    }
  }

  if (j.contains("sweep")) {
    const json& w = j.at("sweep");
    if (!w.is_object()) schema_error("sweep", "expected an object");
    expect_known_keys(w, "sweep",
                      {"theta1_deg", "theta2_start_deg", "theta2_stop_deg",
                       "theta2_step_deg"});
    const std::string p = "sweep.";
    if (w.contains("theta1_deg")) {
      const json& list = w.at("theta1_deg");
      if (!list.is_array() || list.empty()) {
        schema_error("sweep.theta1_deg", "expected a nonempty array of degrees");
      }
      s.sweep.theta1.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_number()) {
          schema_error("sweep.theta1_deg[" + std::to_string(i) + "]",
                       "expected a number");
        }
        s.sweep.theta1.push_back(list[i].get<double>() * kDegree);
      }
    }
    s.sweep.theta2_start =
        get_number(w, p, "theta2_start_deg", s.sweep.theta2_start / kDegree) *
        kDegree;
    s.sweep.theta2_stop =
        get_number(w, p, "theta2_stop_deg", s.sweep.theta2_stop / kDegree) * kDegree;
    s.sweep.theta2_step =
        get_number(w, p, "theta2_step_deg", s.sweep.theta2_step / kDegree) * kDegree;
    if (!(s.sweep.theta2_step > 0.0)) {
      schema_error("sweep.theta2_step_deg", "expected a positive step");
    }
    if (s.sweep.theta2_stop < s.sweep.theta2_start) {
      schema_error("sweep.theta2_stop_deg", "must not precede theta2_start_deg");
    }
  }

  if (j.contains("chsh")) {
    const json& c = j.at("chsh");
    if (!c.is_object()) schema_error("chsh", "expected an object");
    expect_known_keys(c, "chsh", {"settings_deg", "optimize"});
    if (c.contains("settings_deg")) {
      const json& list = c.at("settings_deg");
      if (!list.is_array() || list.size() != 4) {
        schema_error("chsh.settings_deg", "expected [a, a', b, b'] in degrees");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (!list[i].is_number()) {
          schema_error("chsh.settings_deg[" + std::to_string(i) + "]",
                       "expected a number");
        }
      }
      s.chsh.settings = ChshSettings{
          list[0].get<double>() * kDegree, list[1].get<double>() * kDegree,
          list[2].get<double>() * kDegree, list[3].get<double>() * kDegree};
    }
    s.chsh.optimize = get_bool(c, "chsh.", "optimize", s.chsh.optimize);
  }

  if (j.contains("paths")) {
    const json& p = j.at("paths");
    if (!p.is_object()) schema_error("paths", "expected an object");
    expect_known_keys(p, "paths", {"signal", "idler"});
    if (p.contains("signal")) s.paths.signal = parse_path(p.at("signal"), "paths.signal");
    if (p.contains("idler")) s.paths.idler = parse_path(p.at("idler"), "paths.idler");
  }

  if (j.contains("circuit")) {
    const json& c = j.at("circuit");
    if (!c.is_array()) schema_error("circuit", "expected an array of [photon, gate]");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string path = "circuit[" + std::to_string(i) + "]";
      const json& step = c[i];
      if (!step.is_array() || step.size() != 2) {
        schema_error(path, "expected a [photon, gate] pair");
      }
      Photon photon = parse_photon(step[0], path + "[0]");
      if (!step[1].is_string()) schema_error(path + "[1]", "expected a gate name");
      GateOp gate;
      try {
        gate = parse_gate(step[1].get<std::string>());
      } catch (const Error& e) {
        schema_error(path + "[1]", e.what());
      }
      s.custom_circuit.push_back({photon, std::move(gate)});
    }
  }

  s.out_dir = get_string(j, "", "out_dir", "");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io, "cannot open scenario file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(errc::schema, "invalid JSON in '" + path + "': " + e.what());
  }
  return parse_scenario(j);
}

nlohmann::json scenario_to_json(const Scenario& s) {
  json sweep_theta1 = json::array();
  for (double t : s.sweep.theta1) sweep_theta1.push_back(t / kDegree);

  json j = {
      {"source_coherence", s.source.momentum_coherence},
      {"source_white_noise", s.source.white_noise},
      {"gate_bs_coherence", s.gate.v_bs},
      {"gate_dove_coherence", s.gate.v_dp},
      {"per_photon_gate_noise", s.per_photon_gate_noise},
      {"circuit_variant",
       s.variant == CircuitVariant::FullSwap ? "full_swap" : "no_final_mcnot"},
      {"measurement", s.measurement == MeasurementKind::Sweep ? "sweep"
                      : s.measurement == MeasurementKind::Chsh
                          ? "chsh"
                          : "classical_visibility"},
      {"experiment",
       {{"pair_rate", s.experiment.pair_rate},
        {"singles_rate_1", s.experiment.singles_rate_1},
        {"singles_rate_2", s.experiment.singles_rate_2},
        {"window", s.experiment.window},
        {"dwell", s.experiment.dwell},
        {"seed", s.experiment.seed},
        {"include_accidentals", s.experiment.include_accidentals}}},
      {"sweep",
       {{"theta1_deg", sweep_theta1},
        {"theta2_start_deg", s.sweep.theta2_start / kDegree},
        {"theta2_stop_deg", s.sweep.theta2_stop / kDegree},
        {"theta2_step_deg", s.sweep.theta2_step / kDegree}}},
      {"paths",
       {{"signal", s.paths.signal == Momentum::T ? "T" : "B"},
        {"idler", s.paths.idler == Momentum::T ? "T" : "B"}}},
  };

  json chsh = {{"optimize", s.chsh.optimize}};
  if (s.chsh.settings) {
    chsh["settings_deg"] = {s.chsh.settings->a / kDegree,
                            s.chsh.settings->a_prime / kDegree,
                            s.chsh.settings->b / kDegree,
                            s.chsh.settings->b_prime / kDegree};
  }
  j["chsh"] = std::move(chsh);

  if (!s.custom_circuit.empty()) {
    json circuit = json::array();
    for (const CircuitStep& step : s.custom_circuit) {
      circuit.push_back(
          {step.photon == Photon::Signal ? "signal" : "idler", step.gate.label});
    }
    j["circuit"] = std::move(circuit);
  }
  if (!s.out_dir.empty()) j["out_dir"] = s.out_dir;
  return j;
}

PairState prepare_state(const Scenario& s) {
  if (s.custom_circuit.empty()) {
    return imperfect_swap_pipeline(s.source, s.gate,
                                   {s.variant, s.per_photon_gate_noise});
  }
  PairState state = circuit(noisy_source(s.source), s.custom_circuit);
  double v = s.gate.effective_coherence();
  state = dephase_subsystem(state, Photon::Signal, Dof::Polarization, v);
  if (s.per_photon_gate_noise) {
    state = dephase_subsystem(state, Photon::Idler, Dof::Polarization, v);
  }
  return state;
}

ChshSettings scenario_chsh_settings(const Scenario& s) {
  return s.chsh.settings ? *s.chsh.settings : standard_chsh_settings(s.variant);
}

}  // namespace sptq
