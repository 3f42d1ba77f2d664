#pragma once

#include <vector>

#include "fraclab/measure.hpp"

namespace fraclab {

// Pushforward of mu x nu under (x, y) -> |x - y|, binned. Bin edges start at
// 0 with constant width; masses[i] covers [edges[i], edges[i+1]). When nu is
// structurally identical to mu the diagonal pairs (distance exactly 0, mass
// sum of w_i^2) are reported separately in diagonal_mass and excluded from
// the histogram, matching the atom-at-0 convention for self-distance
// measures.
struct DistanceMeasure {
  std::vector<double> bin_edges;
  std::vector<double> masses;
  double diagonal_mass = 0.0;
  double source_mass = 0.0;  // mass(mu) * mass(nu)
};

struct BinSpec {
  double width = 0.0;
  double t_max = 0.0;  // 0 = auto upper bound from the bounding boxes
};

// Errors: dimension (ambient mismatch), bad_bins (width <= 0),
// bins_too_fine (width below either resolution).
DistanceMeasure distance_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const BinSpec& bins);

struct L2Indicator {
  double value = 0.0;             // sum of (mass_i / width)^2 * width
  double refinement_ratio = 0.0;  // value / value at doubled bin width;
                                  // ~1 for L^2 densities, ~2 per halving for atoms
};

// Error: degenerate_bins when the histogram has a single bin.
L2Indicator distance_l2_indicator(const DistanceMeasure& dm);

// sum over bins of density(mu) * density(nu) * midpoint^{1-n} * width, the
// discrete pairing integral int delta(mu) delta(nu) t^{1-n} dt.
// Error: bin_mismatch unless the two histograms share identical edges.
double weighted_distance_pairing(const DistanceMeasure& dmu, const DistanceMeasure& dnu, int n);

}  // namespace fraclab
