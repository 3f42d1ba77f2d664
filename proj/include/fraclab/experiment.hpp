#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraclab/fractal.hpp"

namespace fraclab {

// One experiment = one named scenario from the registry (see scenario_names()),
// fully determined by this config. "Almost all g/t" statements are
// operationalized as pass_fraction of the sampled parameters meeting the bound
// within tolerance; exceptional samples are reported descriptively, never used
// to estimate the exceptional set's dimension.
struct ScenarioConfig {
  std::string scenario;
  int n = 2;                       // ambient half-dimension: sets live in R^2n
  std::vector<FractalSpec> sets;   // scenario-specific roles, see default_config
  int rotation_samples = 50;       // g samples (or t samples for the t-families)
  std::uint64_t seed = 1;
  std::vector<double> scales;      // box-counting scale ladder (decreasing)
  std::vector<double> radii;       // radial grid (spectral r, distance r, ...)
  std::string output_dir = "runs";
  double pass_fraction = 0.9;      // "almost all" sample threshold
  double tolerance = 0.1;          // slope/bound slack
  std::size_t subsample = 100000;  // atom cap before per-sample box counting
};

struct ExperimentRecord {
  std::string scenario;
  std::string config_hash;    // 16 hex digits over the canonical config JSON
  std::uint64_t seed = 0;
  nlohmann::json results;     // per-sample detail (arrays keyed by check name)
  nlohmann::json aggregates = nlohmann::json::object();  // flat map of scalar summaries
  double theorem_bound = 0.0; // the predicted quantity the pass rule tests
  bool pass = false;
  double runtime_seconds = 0.0;
  std::vector<std::string> notes;  // exceptional samples, caveats
};

const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

// Pinned defaults for a registry scenario; errors with "unknown_scenario".
ScenarioConfig default_config(const std::string& scenario);

// Canonical JSON (sorted keys, full field set) used for hashing and artifacts.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

// Strict parse: the document must carry a known "scenario"; remaining fields
// override that scenario's defaults; any unknown key errors ("unknown_key").
ScenarioConfig config_from_json(const nlohmann::json& j);

std::string config_hash(const ScenarioConfig& cfg);

// output_dir/<scenario>_<first 8 hash digits>; a changed config hashes to a
// different directory, so reruns never overwrite other configs' outputs.
std::string run_directory(const ScenarioConfig& cfg);

nlohmann::json record_to_json(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const nlohmann::json& j);

// Executes the scenario and writes record.json, summary.txt, profile_*.csv and
// measures/*.tbl under run_directory(cfg). Deterministic given the config.
// Errors: "unknown_scenario"; "seed_mismatch" when a replayed sub-run or an
// existing record.json disagrees with the configured seed.
ExperimentRecord run_scenario(const ScenarioConfig& cfg);

// Aggregated pass/fail table; distinct explicit text when records is empty.
std::string report_text(const std::vector<ExperimentRecord>& records);
nlohmann::json report_json(const std::vector<ExperimentRecord>& records);

}  // namespace fraclab
