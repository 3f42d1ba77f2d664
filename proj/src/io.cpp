#include "fraclab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fraclab/common.hpp"

namespace fraclab {

namespace {

void ensure_parent_dir(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_measure(const DiscreteMeasure& mu, const std::string& path,
                  const nlohmann::json* meta) {
  validate_measure(mu);
  ensure_parent_dir(path);
  std::ostringstream out;
  out << "# " << mu.ambient_dim << ' ' << mu.atom_count() << ' '
      << format_g17(mu.resolution) << '\n';
  const int d = mu.ambient_dim;
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    const double* p = mu.atom(i);
    for (int k = 0; k < d; ++k) out << format_g17(p[k]) << ' ';
    out << format_g17(mu.weights[i]) << '\n';
  }
  write_text_file(path, out.str());

  nlohmann::json side;
  side["ambient_dim"] = mu.ambient_dim;
  side["atom_count"] = mu.atom_count();
  side["total_mass"] = mu.total_mass;
  side["resolution"] = mu.resolution;
  side["factor_count"] = mu.factors.size();
  if (meta != nullptr) side["provenance"] = *meta;
  write_text_file(path + ".meta.json", side.dump(2) + "\n");
}

DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io_error", "cannot open measure file: " + path);
  std::string header;
  if (!std::getline(in, header) || header.size() < 2 || header[0] != '#')
    fail("parse_error", "measure file missing header: " + path);
  std::istringstream hs(header.substr(1));
  int dim = 0;
  std::size_t atoms = 0;
  double resolution = 0.0;
  if (!(hs >> dim >> atoms >> resolution))
    fail("parse_error", "malformed measure header: " + path);
  if (dim < 1) fail("parse_error", "bad dimension in header: " + path);
  std::vector<double> pts;
  std::vector<double> ws;
  pts.reserve(atoms * static_cast<std::size_t>(dim));
  ws.reserve(atoms);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double v = 0.0;
    for (int k = 0; k < dim; ++k) {
      if (!(ls >> v)) fail("parse_error", "short atom row: " + path);
      pts.push_back(v);
    }
    if (!(ls >> v)) fail("parse_error", "atom row missing weight: " + path);
    ws.push_back(v);
  }
  if (ws.size() != atoms)
    fail("parse_error", "atom count mismatch: header says " +
                            std::to_string(atoms) + ", file has " +
                            std::to_string(ws.size()));
  return make_measure(dim, std::move(pts), std::move(ws), resolution);
}

void save_profile_csv(const SpectralProfile& profile, const std::string& path) {
  std::ostringstream out;
  out << "radius,value,std_error\n";
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    out << format_g17(profile.radii[i]) << ',' << format_g17(profile.values[i])
        << ','
        << format_g17(i < profile.std_errors.size() ? profile.std_errors[i]
                                                    : 0.0)
        << '\n';
  }
  out << "# kind=" << profile.kind
      << " quadrature_nodes=" << profile.quadrature_nodes << '\n';
  write_text_file(path, out.str());
}

void save_fit_csv(const ScalingFit& fit, const std::string& path) {
  std::ostringstream out;
  out << "log_scale,log_value\n";
  for (std::size_t i = 0; i < fit.log_scales.size(); ++i) {
    out << format_g17(fit.log_scales[i]) << ',' << format_g17(fit.log_values[i])
        << '\n';
  }
  out << "# slope=" << format_g17(fit.slope)
      << " intercept=" << format_g17(fit.intercept)
      << " r2=" << format_g17(fit.r_squared)
      << " spread=" << format_g17(fit.offset_spread) << '\n';
  for (const BoxCount& c : fit.counts) {
    out << "# count scale=" << format_g17(c.scale) << " occupied=" << c.occupied
        << '\n';
  }
  write_text_file(path, out.str());
}

void save_distance_csv(const DistanceMeasure& dm, const std::string& path) {
  std::ostringstream out;
  out << "bin_start,bin_end,mass\n";
  for (std::size_t i = 0; i + 1 < dm.bin_edges.size(); ++i) {
    out << format_g17(dm.bin_edges[i]) << ',' << format_g17(dm.bin_edges[i + 1])
        << ',' << format_g17(dm.masses[i]) << '\n';
  }
  out << "# diagonal_mass=" << format_g17(dm.diagonal_mass)
      << " source_mass=" << format_g17(dm.source_mass) << '\n';
  write_text_file(path, out.str());
}

namespace {

bool known_kind(const std::string& name) {
  static const char* kinds[] = {"central_cantor", "product",        "sharpness_A",
                                "sharpness_B",    "difference_set", "affine_embed"};
  for (const char* k : kinds) {
    if (name == k) return true;
  }
  return false;
}

}  // namespace

nlohmann::json fractal_spec_to_json(const FractalSpec& spec) {
  if (!known_kind(spec.kind)) fail("unknown_kind", "unknown fractal kind: " + spec.kind);
  nlohmann::json j;
  j["kind"] = spec.kind;
  j["dimension_target"] = spec.dimension_target;
  j["level"] = spec.level;
  if (spec.ratio > 0.0) j["ratio"] = spec.ratio;
  if (spec.seed != 0) j["seed"] = spec.seed;
  if (!spec.children.empty()) {
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : spec.children) kids.push_back(fractal_spec_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

FractalSpec fractal_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("parse_error", "fractal spec must be an object");
  static const char* allowed[] = {"kind",  "dimension_target", "level",
                                  "ratio", "seed",             "children"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || (it.key() == a);
    if (!ok) fail("unknown_key", "unknown fractal spec key: " + it.key());
  }
  if (!j.contains("kind")) fail("parse_error", "fractal spec missing kind");
  FractalSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (!known_kind(spec.kind)) fail("unknown_kind", "unknown fractal kind: " + spec.kind);
  spec.dimension_target = j.value("dimension_target", 0.0);
  spec.level = j.value("level", 1);
  spec.ratio = j.value("ratio", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("children")) {
    for (const auto& cj : j.at("children"))
      spec.children.push_back(fractal_spec_from_json(cj));
  }
  return spec;
}

std::string json_hash(const nlohmann::json& j) {
  // dump() emits object keys in sorted order, so the digest is canonical.
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("io_error", "cannot open for write: " + path);
  out << content;
  out.flush();
  if (!out) fail("io_error", "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("io_error", "cannot open for read: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fraclab
