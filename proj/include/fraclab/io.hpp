#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fraclab/dimension.hpp"
#include "fraclab/distance.hpp"
#include "fraclab/fractal.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

// Atom table: header line "# <dim> <atoms> <resolution>", one row per atom
// with coordinates then weight, %.17g so doubles round-trip exactly. A JSON
// sidecar <path>.meta.json carries mass, dimension and optional provenance.
void save_measure(const DiscreteMeasure& mu, const std::string& path,
                  const nlohmann::json* meta = nullptr);
DiscreteMeasure load_measure(const std::string& path);

void save_profile_csv(const SpectralProfile& profile, const std::string& path);
void save_fit_csv(const ScalingFit& fit, const std::string& path);
void save_distance_csv(const DistanceMeasure& dm, const std::string& path);

nlohmann::json fractal_spec_to_json(const FractalSpec& spec);
// Strict: unrecognized keys raise unknown_key.
FractalSpec fractal_spec_from_json(const nlohmann::json& j);

// FNV-1a over the canonical (sorted-key) dump, rendered as 16 hex digits.
std::string json_hash(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fraclab
