#pragma once

// Report generation: run a scenario end to end and emit a JSON document
// with the inputs echoed, exact model predictions, sampled data, fits, and
// derived quantities; write it (plus CSV data tables) to disk.

#include <string>

#include "json.hpp"

#include "sptq/scenario.hpp"

namespace sptq {

/// Dispatch on the scenario's measurement kind. exact = no sampling: the
/// counts columns carry expected values and uncertainties are zero.
nlohmann::json run_experiment(const Scenario& s, bool exact);

/// Exact state summary: density matrix, subsystem purities, concurrences,
/// fidelity to the ideal transfer target.
nlohmann::json state_report(const Scenario& s);

/// Structural checks on an emitted report, including re-parsing the echoed
/// scenario. Throws on violation.
void validate_report(const nlohmann::json& report);

/// Write report.json (and per-curve CSV tables for sweep reports, columns
/// theta2_deg,counts,dwell_s,prob_exact) under out_dir.
void write_outputs(const nlohmann::json& report, const std::string& out_dir);

}  // namespace sptq
