#pragma once

// Scenario files: the JSON description of one simulated run (source and
// gate imperfections, circuit variant, measurement plan, counting
// configuration). Angles in files are degrees; everything in memory is
// radians.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sptq/experiment.hpp"
#include "sptq/noise.hpp"

namespace sptq {

enum class MeasurementKind { Sweep, Chsh, ClassicalVisibility };

struct SweepPlan {
  std::vector<double> theta1;  // arm-1 angles, radians
  double theta2_start = 0.0;
  double theta2_stop = 0.0;
  double theta2_step = 0.0;
  SweepPlan();  // defaults: arm 1 at 0 and 45 deg, arm 2 from 0 to 180 step 10
};

struct ChshPlan {
  // Absent means the standard settings for the scenario's circuit variant.
  std::optional<ChshSettings> settings;
  bool optimize = true;
};

struct Scenario {
  SourceParams source;
  GateNoise gate;
  bool per_photon_gate_noise = false;
  CircuitVariant variant = CircuitVariant::FullSwap;
  MeasurementKind measurement = MeasurementKind::Sweep;
  ExperimentConfig experiment;
  SweepPlan sweep;
  ChshPlan chsh;
  PathSelection paths;
  // Overrides the built-in transfer circuit when nonempty.
  std::vector<CircuitStep> custom_circuit;
  std::string out_dir;
};

/// Parse and validate. Errors name the offending field, e.g.
/// "experiment.pair_rate: expected a nonnegative number".
Scenario parse_scenario(const nlohmann::json& j);

/// Read a scenario file. Missing file or unparseable JSON reported as I/O
/// or schema errors.
Scenario load_scenario(const std::string& path);

/// Inverse of parse_scenario, with every default filled in. Used to echo
/// inputs into reports; parse_scenario(scenario_to_json(s)) reproduces s.
nlohmann::json scenario_to_json(const Scenario& s);

/// Source, transfer circuit (built-in or custom), then gate dephasing.
PairState prepare_state(const Scenario& s);

/// The CHSH angles the scenario will measure at.
ChshSettings scenario_chsh_settings(const Scenario& s);

}  // namespace sptq
