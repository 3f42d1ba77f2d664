#pragma once

#include <string>

#include "fraclab/experiment.hpp"

namespace fraclab::detail {

// Fills results, aggregates, theorem_bound, pass and notes; may write
// profile/measure artifacts under out_dir. The caller stamps identity fields
// (scenario, seed, hash, runtime) and persists record.json plus summary.txt.
ExperimentRecord run_scenario_body(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace fraclab::detail
