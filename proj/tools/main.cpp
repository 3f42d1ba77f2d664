#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclab/common.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/fractal.hpp"
#include "fraclab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cmd_list(bool verbose) {
  for (const std::string& name : fraclab::scenario_names()) {
    if (verbose) {
      fraclab::ScenarioConfig cfg = fraclab::default_config(name);
      std::printf("%-24s n=%d sets=%zu rotation_samples=%d seed=%llu\n", name.c_str(), cfg.n,
                  cfg.sets.size(), cfg.rotation_samples,
                  static_cast<unsigned long long>(cfg.seed));
    } else {
      std::printf("%s\n", name.c_str());
    }
  }
  return 0;
}

int cmd_build(const std::string& config_path, const std::string& kind, double dimension,
              double ratio, int level, std::uint64_t seed, bool seed_set,
              const std::string& out_dir, bool verbose) {
  fraclab::FractalSpec spec;
  if (!config_path.empty()) {
    spec = fraclab::fractal_spec_from_json(json::parse(fraclab::read_text_file(config_path)));
  } else {
    spec.kind = kind;
    spec.dimension_target = dimension;
    spec.ratio = ratio;
    spec.level = level;
  }
  if (seed_set) spec.seed = seed;

  fraclab::ConstructedSet set = fraclab::build_from_spec(spec);
  fs::create_directories(out_dir);
  const std::string path =
      out_dir + "/" + spec.kind + "_L" + std::to_string(spec.level) + ".tbl";
  json meta;
  meta["spec"] = fraclab::fractal_spec_to_json(spec);
  meta["nominal_dimension"] = set.nominal_dimension;
  fraclab::save_measure(set.measure, path, &meta);
  std::printf("wrote %s\n", path.c_str());
  std::printf("atoms %zu  ambient_dim %d  nominal_dimension %.6g  resolution %.6g\n",
              set.measure.atom_count(), set.measure.ambient_dim, set.nominal_dimension,
              set.measure.resolution);
  if (verbose) std::printf("%s\n", meta["spec"].dump(2).c_str());
  return 0;
}

int cmd_run(const std::string& scenario, const std::string& config_path, std::uint64_t seed,
            bool seed_set, const std::string& out_dir, bool verbose) {
  fraclab::ScenarioConfig cfg;
  if (!config_path.empty()) {
    json doc = json::parse(fraclab::read_text_file(config_path));
    if (!doc.contains("scenario")) {
      doc["scenario"] = scenario;
    } else if (doc["scenario"].get<std::string>() != scenario) {
      std::fprintf(stderr, "error [bad_config]: config file names scenario '%s', not '%s'\n",
                   doc["scenario"].get<std::string>().c_str(), scenario.c_str());
      return 3;
    }
    cfg = fraclab::config_from_json(doc);
  } else {
    cfg = fraclab::default_config(scenario);
  }
  if (seed_set) cfg.seed = seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  if (verbose) std::printf("%s\n", fraclab::config_to_json(cfg).dump(2).c_str());
  fraclab::ExperimentRecord rec = fraclab::run_scenario(cfg);
  const std::string dir = fraclab::run_directory(cfg);
  if (verbose) {
    std::printf("%s", fraclab::read_text_file(dir + "/summary.txt").c_str());
  } else {
    std::printf("%s  bound %.6g  pass %s  (%.2f s)\n", rec.scenario.c_str(), rec.theorem_bound,
                rec.pass ? "yes" : "no", rec.runtime_seconds);
    for (const std::string& note : rec.notes) std::printf("  note: %s\n", note.c_str());
  }
  std::printf("wrote %s\n", dir.c_str());
  return rec.pass ? 0 : 1;
}

int cmd_report(const std::string& filter, const std::string& out_dir, bool verbose) {
  std::vector<fraclab::ExperimentRecord> records;
  std::vector<fs::path> files;
  if (fs::exists(out_dir)) {
    for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
      if (entry.is_regular_file() && entry.path().filename() == "record.json") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    fraclab::ExperimentRecord rec =
        fraclab::record_from_json(json::parse(fraclab::read_text_file(p.string())));
    if (!filter.empty() && rec.scenario != filter) continue;
    records.push_back(std::move(rec));
  }

  std::printf("%s", fraclab::report_text(records).c_str());
  if (verbose) std::printf("%s\n", fraclab::report_json(records).dump(2).c_str());
  if (records.empty()) return 2;
  for (const fraclab::ExperimentRecord& rec : records) {
    if (!rec.pass) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for projection, rotation and distance scaling experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 0;
  bool verbose = false;
  CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory (default: runs)");
  app.add_option("--threads", threads, "worker thread count (default: hardware)");
  app.add_flag("--verbose", verbose, "print configs and full summaries");

  CLI::App* list_cmd = app.add_subcommand("list", "print the scenario registry");

  CLI::App* build_cmd = app.add_subcommand("build", "construct and serialize a fractal measure");
  std::string kind = "central_cantor";
  double dimension = 0.6309297535714574;
  double ratio = 0.0;
  int level = 8;
  build_cmd->add_option("--kind", kind, "construction kind (ignored with --config)");
  build_cmd->add_option("--dimension", dimension, "target similarity dimension");
  build_cmd->add_option("--ratio", ratio, "contraction ratio (overrides --dimension)");
  build_cmd->add_option("--level", level, "iteration depth");

  CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario");
  std::string scenario;
  run_cmd->add_option("scenario", scenario, "registry name")->required();

  CLI::App* report_cmd = app.add_subcommand("report", "aggregate saved records");
  std::string filter;
  report_cmd->add_option("scenario", filter, "only report this scenario");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) fraclab::set_thread_count(std::size_t(threads));
    const bool seed_set = seed_opt->count() > 0;
    if (list_cmd->parsed()) return cmd_list(verbose);
    if (build_cmd->parsed()) {
      return cmd_build(config_path, kind, dimension, ratio, level, seed, seed_set,
                       out_dir.empty() ? "runs" : out_dir, verbose);
    }
    if (run_cmd->parsed()) {
      return cmd_run(scenario, config_path, seed, seed_set, out_dir, verbose);
    }
    if (report_cmd->parsed()) {
      return cmd_report(filter, out_dir.empty() ? "runs" : out_dir, verbose);
    }
  } catch (const fraclab::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
