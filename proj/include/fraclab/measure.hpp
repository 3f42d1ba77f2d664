#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fraclab/common.hpp"

namespace fraclab {

// Hard cap on atoms produced by product constructions.
constexpr std::size_t kProductAtomCap = 10'000'000;
// Supports must stay inside [-1e6, 1e6]^d.
constexpr double kSupportBound = 1e6;

// Finite atomic approximation of a compactly supported Radon measure.
// `points` is row-major (atom i occupies [i*ambient_dim, (i+1)*ambient_dim)).
// `resolution` is the finest scale at which the atomic cloud still represents
// the underlying set; 0 means no scale is recorded. Estimators refuse to probe
// below it instead of returning atom artifacts.
//
// `factors` optionally stores a product factorization (coordinates of factor
// j follow those of factors 0..j-1). It is advisory: all ops act on the flat
// atom list, but the Fourier transform uses the factorization to evaluate
// products exactly at a fraction of the cost. Operations that break product
// structure (pushforward, subsampling) clear it.
struct DiscreteMeasure {
  int ambient_dim = 0;
  std::vector<double> points;
  std::vector<double> weights;
  double total_mass = 0.0;
  double resolution = 0.0;
  std::vector<DiscreteMeasure> factors;

  std::size_t atom_count() const { return weights.size(); }
  const double* atom(std::size_t i) const { return points.data() + i * std::size_t(ambient_dim); }
};

// Validates and assembles a measure; throws on any invariant violation:
//   dimension        d < 1
//   shape_mismatch   points.size() != weights.size() * d
//   empty_measure    no atoms
//   negative_weight  weight < 0 or not finite
//   zero_mass        all weights zero
//   support_bound    coordinate not finite or |coordinate| > 1e6
//   bad_resolution   resolution < 0 or not finite
DiscreteMeasure make_measure(int ambient_dim, std::vector<double> points,
                             std::vector<double> weights, double resolution);

// Re-checks the invariants of an existing measure (used after pushforward).
void validate_measure(const DiscreteMeasure& mu);

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

// mu(closed ball). Errors: dimension (center dim mismatch), bad_radius.
double ball_mass(const DiscreteMeasure& mu, const Ball& ball);

// Diameter upper bound from the bounding box (cheap, used for quadrature
// bandwidths and scale ladders).
double bounding_diameter(const DiscreteMeasure& mu);

struct FrostmanEstimate {
  double exponent = 0.0;        // clamped to [0, ambient_dim]
  double constant = 0.0;        // C with mu(B(x,r)) <~ C r^exponent
  std::vector<double> radii_used;
  double max_violation = 0.0;   // max over samples of mu(B)/(C r^e) - 1, >= 0
  double residual = 0.0;        // rms log-residual of the fit
};

struct CenterPolicy {
  std::size_t count = 256;      // weight-sampled centers
  std::uint64_t seed = 1;
};

// Least-squares slope of log max-ball-mass against log r over the radius grid,
// with the max taken over weight-sampled atom centers. Errors:
// insufficient_scales (< 3 radii), below_resolution (radius under resolution),
// bad_radius (non-positive radius).
FrostmanEstimate frostman_exponent(const DiscreteMeasure& mu,
                                   const std::vector<double>& radii,
                                   const CenterPolicy& policy = {});

// Product measure on R^{d1+d2}, atoms in mu-major lexicographic order,
// weights multiplied. Factor lists are flattened so nested products keep the
// full factorization. Error: product_too_large above `cap` atoms.
DiscreteMeasure product_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                std::size_t cap = kProductAtomCap);

// Image measure under an arbitrary map given with a fixed output dimension.
// Weights are carried over unchanged (mass preserved exactly); resolution is
// kept unless `resolution_out` >= 0 is supplied; factors are dropped.
// Errors: map_dimension (dim_out < 1), plus revalidation of the image.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, int dim_out,
                            const std::function<void(const double*, double*)>& map,
                            double resolution_out = -1.0);

// Convenience overload that infers the output dimension from the first atom
// and insists every atom agrees (error map_dimension otherwise).
DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<std::vector<double>(const double*, int)>& map);

// Lower-derivative proxy: min over the given decreasing radii of
// mu(B(z,r)) / (vol_d r^d). Radii below the resolution are refused
// (below_resolution); z must match the ambient dimension.
double lower_derivative_density(const DiscreteMeasure& mu, const std::vector<double>& z,
                                const std::vector<double>& radii);

// Weight-proportional resample with replacement; m atoms of equal weight
// total_mass/m. Deterministic in `seed`. Factors are dropped.
DiscreteMeasure subsample(const DiscreteMeasure& mu, std::size_t m, std::uint64_t seed);

}  // namespace fraclab
