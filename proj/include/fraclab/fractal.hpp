#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/measure.hpp"

namespace fraclab {

// Recipe for a deterministic test-bed set. Kinds:
//   central_cantor  level-k central Cantor measure on [0,1]; contraction from
//                   `ratio` if ratio > 0, else from `dimension_target`
//   product         children[0] x children[1]
//   sharpness_A     C_s x grid x {0} x grid in R^4 (grids at the Cantor scale)
//   sharpness_B     {0} x C_s x {0} x C_s in R^4
//   difference_set  all pairwise differences of a 1-d child
//   affine_embed    child with one zero coordinate appended
struct FractalSpec {
  std::string kind;
  double dimension_target = 0.0;
  int level = 1;
  double ratio = 0.0;          // 0 = derive from dimension_target
  std::uint64_t seed = 0;      // reserved for randomized kinds; current kinds are deterministic
  std::vector<FractalSpec> children;
};

struct ConstructedSet {
  DiscreteMeasure measure;
  double nominal_dimension = 0.0;   // within [0, ambient_dim]
  double resolution = 0.0;          // = contraction^level for Cantor kinds
  FractalSpec provenance;
};

// Central Cantor measure with contraction ratio 2^(-1/s), so the attractor has
// dimension s. Atoms sit at level-k interval midpoints with weight 2^-k.
// Errors: bad_dimension (s <= 0 or s > 1), bad_level, too_large.
ConstructedSet build_cantor(double s, int level);

// Same construction from an explicit contraction ratio in (0, 1/2]; the
// dimension is log 2 / log(1/ratio). Ratio exactly 1/3 gives the middle-thirds
// measure with exact triadic geometry. Errors: bad_ratio, bad_level, too_large.
ConstructedSet build_cantor_ratio(double ratio, int level);

// Product set; nominal dimension = min(sum of nominals, ambient dimension),
// which is exact for the transverse self-similar inputs built here.
ConstructedSet build_product(const ConstructedSet& a, const ConstructedSet& b);

// A_s = C_s x G x {0} x G in R^4 with G a uniform grid at the Cantor
// resolution. dim A_s = 2 + s; the x -> x - t y images have dimension 1 + s
// for every t, which meets the projection lower bound with equality.
// Errors: as build_cantor, plus too_large when 2^k * m^2 exceeds the cap.
ConstructedSet build_sharpness_A(double s, int level);

// B_s = {0} x C_s x {0} x C_s in R^4, dim 2s. For the embedded reflection
// subgroup diag(h, 1) the image x - g(y) collapses to {0} x (C_s - C_s),
// box dimension log 3 / log(1/ratio) < 2s, while generic rotations give the
// full 2s. The measure on the collapsed image still obeys a Frostman bound
// with exponent s (heaviest point at the origin).
ConstructedSet build_sharpness_B(double s, int level);

// All pairwise differences x - y of a 1-dimensional set, with product weights;
// resolution doubles. Nominal dimension for a central Cantor child:
// min(1, log 3 / log(1/ratio)) when ratio <= 1/3 (three separated branches per
// level), 1.0 above that (interval). Other children get the sumset cap
// min(1, 2 dim). Errors: dimension (input not 1-d), too_large.
ConstructedSet difference_set(const ConstructedSet& c);

// Appends one zero coordinate (isometric embedding into R^{d+1}); nominal
// dimension and resolution are unchanged.
ConstructedSet affine_embed(const ConstructedSet& c);

// Uniform grid of m midpoint atoms on [0,1], total mass 1, resolution 1/m.
DiscreteMeasure uniform_grid_1d(std::size_t m);

// m equally spaced atoms on the unit circle, total mass 1. Not a FractalSpec
// kind; used as a smooth reference measure with known transform decay.
DiscreteMeasure circle_measure(std::size_t m);

// Dispatch on spec.kind; validates arity ("bad_children") and kind
// ("unknown_kind").
ConstructedSet build_from_spec(const FractalSpec& spec);

// Rebuilds the same recipe with every level replaced by `level` (used for
// construction-level sweeps).
FractalSpec with_level(FractalSpec spec, int level);

}  // namespace fraclab
