#include "fraclab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fraclab/common.hpp"
#include "fraclab/io.hpp"
#include "scenario_impl.hpp"

namespace fraclab {

bool is_scenario(const std::string& name) {
  for (const auto& s : scenario_names()) {
    if (s == name) return true;
  }
  return false;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = cfg.scenario;
  j["n"] = cfg.n;
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : cfg.sets) sets.push_back(fractal_spec_to_json(s));
  j["sets"] = std::move(sets);
  j["rotation_samples"] = cfg.rotation_samples;
  j["seed"] = cfg.seed;
  j["scales"] = cfg.scales;
  j["radii"] = cfg.radii;
  j["output_dir"] = cfg.output_dir;
  j["pass_fraction"] = cfg.pass_fraction;
  j["tolerance"] = cfg.tolerance;
  j["subsample"] = cfg.subsample;
  return j;
}

namespace {

void validate_config(const ScenarioConfig& cfg) {
  if (!is_scenario(cfg.scenario)) fail("unknown_scenario", "no such scenario: '" + cfg.scenario + "'");
  if (cfg.n < 1 || cfg.n > 3) fail("unsupported_dimension", "n must be 1, 2 or 3");
  if (cfg.rotation_samples < 1) fail("bad_config", "rotation_samples must be >= 1");
  if (!(cfg.pass_fraction > 0.0) || cfg.pass_fraction > 1.0)
    fail("bad_config", "pass_fraction must be in (0, 1]");
  if (!(cfg.tolerance >= 0.0)) fail("bad_config", "tolerance must be >= 0");
  if (cfg.subsample < 100) fail("bad_config", "subsample cap must be >= 100");
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    if (!(cfg.scales[i] > 0.0)) fail("bad_scales", "scales must be positive");
    if (i > 0 && !(cfg.scales[i] < cfg.scales[i - 1]))
      fail("bad_scales", "scales must be strictly decreasing");
  }
  for (double r : cfg.radii) {
    if (!(r > 0.0)) fail("bad_radius", "radii must be positive");
  }
  for (const auto& s : cfg.sets) fractal_spec_to_json(s);  // kind check
}

}  // namespace

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("parse_error", "config must be a JSON object");
  static const char* allowed[] = {"scenario", "n",      "sets",          "rotation_samples",
                                  "seed",     "scales", "radii",         "output_dir",
                                  "pass_fraction",      "tolerance",     "subsample"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || (it.key() == a);
    if (!ok) fail("unknown_key", "unknown config key: '" + it.key() + "'");
  }
  if (!j.contains("scenario")) fail("parse_error", "config missing 'scenario'");
  ScenarioConfig cfg = default_config(j.at("scenario").get<std::string>());
  if (j.contains("n")) cfg.n = j.at("n").get<int>();
  if (j.contains("sets")) {
    cfg.sets.clear();
    for (const auto& sj : j.at("sets")) cfg.sets.push_back(fractal_spec_from_json(sj));
  }
  if (j.contains("rotation_samples")) cfg.rotation_samples = j.at("rotation_samples").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("scales")) cfg.scales = j.at("scales").get<std::vector<double>>();
  if (j.contains("radii")) cfg.radii = j.at("radii").get<std::vector<double>>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("pass_fraction")) cfg.pass_fraction = j.at("pass_fraction").get<double>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
  if (j.contains("subsample")) cfg.subsample = j.at("subsample").get<std::size_t>();
  validate_config(cfg);
  return cfg;
}

std::string config_hash(const ScenarioConfig& cfg) { return json_hash(config_to_json(cfg)); }

std::string run_directory(const ScenarioConfig& cfg) {
  return cfg.output_dir + "/" + cfg.scenario + "_" + config_hash(cfg).substr(0, 8);
}

nlohmann::json record_to_json(const ExperimentRecord& rec) {
  nlohmann::json j;
  j["scenario"] = rec.scenario;
  j["config_hash"] = rec.config_hash;
  j["seed"] = rec.seed;
  j["results"] = rec.results;
  j["aggregates"] = rec.aggregates;
  j["theorem_bound"] = rec.theorem_bound;
  j["pass"] = rec.pass;
  j["runtime_seconds"] = rec.runtime_seconds;
  j["notes"] = rec.notes;
  return j;
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord rec;
  rec.scenario = j.value("scenario", std::string{});
  rec.config_hash = j.value("config_hash", std::string{});
  rec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("results")) rec.results = j.at("results");
  if (j.contains("aggregates")) rec.aggregates = j.at("aggregates");
  rec.theorem_bound = j.value("theorem_bound", 0.0);
  rec.pass = j.value("pass", false);
  rec.runtime_seconds = j.value("runtime_seconds", 0.0);
  if (j.contains("notes")) rec.notes = j.at("notes").get<std::vector<std::string>>();
  return rec;
}

namespace {

std::string summary_text(const ExperimentRecord& rec) {
  std::ostringstream out;
  out << "scenario: " << rec.scenario << '\n';
  out << "config:   " << rec.config_hash << '\n';
  out << "seed:     " << rec.seed << '\n';
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", rec.theorem_bound);
  out << "bound:    " << buf << '\n';
  out << "pass:     " << (rec.pass ? "yes" : "no") << '\n';
  std::snprintf(buf, sizeof(buf), "%.2f", rec.runtime_seconds);
  out << "runtime:  " << buf << " s\n";
  out << "aggregates:\n";
  for (auto it = rec.aggregates.begin(); it != rec.aggregates.end(); ++it) {
    out << "  " << it.key() << " = " << it.value().dump() << '\n';
  }
  if (!rec.notes.empty()) {
    out << "notes:\n";
    for (const auto& n : rec.notes) out << "  - " << n << '\n';
  }
  return out.str();
}

}  // namespace

ExperimentRecord run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const std::string dir = run_directory(cfg);
  const std::string rec_path = dir + "/record.json";
  const std::string hash = config_hash(cfg);
  if (std::filesystem::exists(rec_path)) {
    nlohmann::json old = nlohmann::json::parse(read_text_file(rec_path));
    const std::uint64_t old_seed = old.value("seed", cfg.seed);
    const std::string old_hash = old.value("config_hash", hash);
    if (old_seed != cfg.seed || old_hash != hash) {
      fail("seed_mismatch", "existing record in " + dir +
                                " carries seed " + std::to_string(old_seed) + " / hash " + old_hash +
                                "; it does not match this configuration, refusing to overwrite");
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(dir + "/measures", ec);

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec = detail::run_scenario_body(cfg, dir);
  const auto t1 = std::chrono::steady_clock::now();

  rec.scenario = cfg.scenario;
  rec.seed = cfg.seed;
  rec.config_hash = hash;
  rec.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();

  nlohmann::json artifact = record_to_json(rec);
  artifact["config"] = config_to_json(cfg);
  write_text_file(rec_path, artifact.dump(2) + "\n");
  write_text_file(dir + "/summary.txt", summary_text(rec));
  return rec;
}

std::string report_text(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) {
    return "no records: nothing was run or everything was filtered out\n";
  }
  std::ostringstream out;
  out << "scenario                 bound        measured     margin       pass\n";
  std::size_t passed = 0;
  for (const auto& rec : records) {
    double measured = rec.aggregates.value("measured", std::nan(""));
    double margin = rec.aggregates.value("margin", std::nan(""));
    char line[160];
    std::snprintf(line, sizeof(line), "%-24s %-12.5g %-12.5g %-12.5g %s\n", rec.scenario.c_str(),
                  rec.theorem_bound, measured, margin, rec.pass ? "yes" : "NO");
    out << line;
    if (rec.pass) ++passed;
  }
  out << "pass " << passed << "/" << records.size() << '\n';
  return out.str();
}

nlohmann::json report_json(const std::vector<ExperimentRecord>& records) {
  nlohmann::json j;
  j["record_count"] = records.size();
  if (records.empty()) {
    j["status"] = "no_records";
    return j;
  }
  std::size_t passed = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json row;
    row["scenario"] = rec.scenario;
    row["config_hash"] = rec.config_hash;
    row["bound"] = rec.theorem_bound;
    row["measured"] = rec.aggregates.value("measured", std::nan(""));
    row["margin"] = rec.aggregates.value("margin", std::nan(""));
    row["pass"] = rec.pass;
    rows.push_back(std::move(row));
    if (rec.pass) ++passed;
  }
  j["rows"] = std::move(rows);
  j["passed"] = passed;
  j["status"] = (passed == records.size()) ? "all_passed" : "failures";
  return j;
}

}  // namespace fraclab
