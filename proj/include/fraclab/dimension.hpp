#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/fractal.hpp"
#include "fraclab/measure.hpp"

namespace fraclab {

struct BoxCount {
  double scale = 0.0;
  std::size_t occupied = 0;
};

// Log-log fit of box counts against 1/scale. `counts` holds the zero-offset
// counts at every requested scale (exact at grid-aligned scales); the fitted
// `slope` comes from the origin-anchored grid, which is the faithful
// estimator for grid-built sets. Three extra seeded grid offsets are fitted
// as well; their slopes and spread are reported as a stability diagnostic.
// `scale_window` is the [finest, coarsest] pair actually fitted after
// trimming.
struct ScalingFit {
  std::vector<double> log_scales;
  std::vector<double> log_values;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> scale_window{0.0, 0.0};
  std::vector<double> offset_slopes;
  double offset_spread = 0.0;
  std::vector<BoxCount> counts;
};

// Number of occupied cells of the grid scale * (Z^d + offset). Offsets are
// fractions of a cell in [0,1)^d (null means zero offset). Cell indices are
// packed exactly per dimension; scales that would overflow the packing raise
// scale_overflow instead of risking hash collisions.
std::size_t box_count(const std::vector<double>& points, int dim, double scale,
                      const double* offset = nullptr);

// Box-dimension estimate over a strictly decreasing scale ladder.
// Scales below resolution_floor raise below_resolution; after trimming
// saturated (occupied >= 0.9 * point count) and plateaued (occupied < 8)
// scales at least 4 must survive, else insufficient_scales. empty_set for an
// empty cloud.
ScalingFit box_dimension(const std::vector<double>& points, int dim,
                         const std::vector<double>& scales, double resolution_floor);

ScalingFit box_dimension(const DiscreteMeasure& mu, const std::vector<double>& scales);

struct PositivityVerdict {
  std::string verdict;  // "positive" | "null" | "inconclusive"
  ScalingFit fit;       // covered volume (occupied * scale^d) against scale
};

// Covered-volume test: positive when log covered volume is flat (slope within
// 0.15 of 0) over the finest fitted scales, null when it decays with slope
// <= -0.3, inconclusive between. Deterministic given the cloud and floor.
PositivityVerdict lebesgue_positivity(const std::vector<double>& points, int dim,
                                      double resolution_floor);

PositivityVerdict lebesgue_positivity(const DiscreteMeasure& mu);

struct EnergyDimension {
  double value = 0.0;
  std::string flag;  // "", "zero_dimensional", "all_divergent"
  // per grid value: growth of I_s across the trailing level window
  std::vector<double> s_grid;
  std::vector<double> growth;
  double threshold = 1.5;
};

// Energy-based dimension detector: rebuilds the provenance recipe at level
// k-4 and k and accepts s while the total I_s growth over that window stays
// under 1.5 (scaled as 1.5^(w/4) for windows of w < 4 levels); returns the
// largest accepted grid value. The boundary sits at the construction dimension
// because per-level growth crosses 1 exactly there. Errors: no_level_sweep
// (level < 2); a single-atom input short-circuits to 0 with flag
// "zero_dimensional".
EnergyDimension energy_dimension(const ConstructedSet& cs, const std::vector<double>& s_grid);

// Riesz s-energy of the atomic measure, diagonal excluded: pairs closer than
// the resolution are clamped to it (count reported); with no recorded
// resolution, coincident atoms make the energy infinite.
struct SpatialEnergy {
  double value = 0.0;
  std::size_t clamped_pairs = 0;
  bool infinite = false;
};

SpatialEnergy riesz_energy_spatial(const DiscreteMeasure& mu, double s);

}  // namespace fraclab
