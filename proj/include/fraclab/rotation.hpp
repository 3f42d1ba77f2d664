#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fraclab/measure.hpp"

namespace fraclab {

// Element of O(n), n in {1, 2, 3}; `m` is row-major n x n.
struct Rotation {
  int dim = 0;
  std::vector<double> m;

  double entry(int i, int j) const { return m[std::size_t(i) * dim + j]; }
};

// Validates orthogonality (max entry of g^T g - I within 1e-12) and builds the
// element. Errors: unsupported_dimension, not_orthogonal.
Rotation make_rotation(int dim, std::vector<double> entries);

void apply_rotation(const Rotation& g, const double* in, double* out);
// g^T x, which equals g^{-1} x for orthogonal g.
void apply_inverse(const Rotation& g, const double* in, double* out);
double rotation_determinant(const Rotation& g);
// Operator-norm distance estimate between two elements (max singular value of
// the difference, computed from the 2x2 / 3x3 Gram matrix).
double rotation_distance(const Rotation& a, const Rotation& b);

// One Haar sample from O(n) including reflections: n=1 uniform sign, n=2
// uniform angle plus a fair reflection, n=3 Gram-Schmidt of a Gaussian matrix
// (positive-diagonal convention, which is Haar on the full group).
// Error: unsupported_dimension for n not in {1,2,3}.
Rotation haar_sample(int n, std::mt19937_64& rng);

// Weighted cloud of group elements standing in for a measure theta on O(n).
// beta is the concentration exponent from the ball-mass bound
// theta({g : |x - g z| < r}) <= C (min(r/|x|, r/|z|))^beta; for the full group
// beta = alpha - (n-1)(n-2)/2 with alpha = dim O(n) = n(n-1)/2.
struct RotationMeasure {
  std::vector<Rotation> samples;
  std::vector<double> weights;
  double alpha = 0.0;
  double beta = 0.0;
};

RotationMeasure haar_rotation_measure(int n, std::size_t count, std::uint64_t seed);

// O(n-1) embedded as block diag(h, 1): the last coordinate axis is fixed.
// For n = 2 this is the two-element group {I, diag(-1, 1)}; its alpha is 0,
// hence beta = 0 and the concentration bound degenerates, which is the point
// of the sharpness examples.
RotationMeasure subgroup_rotation_measure(int n, std::size_t count, std::uint64_t seed);

// S_g(x, y) = x - g(y) and pi_t(x, y) = x - t y on R^n x R^n.
std::vector<double> apply_S(const Rotation& g, const std::vector<double>& x,
                            const std::vector<double>& y);
std::vector<double> apply_pi(double t, const std::vector<double>& x,
                             const std::vector<double>& y);

// Pushforward of a measure on R^{2n} under S_g / pi_t (image lives in R^n).
DiscreteMeasure apply_S_measure(const Rotation& g, const DiscreteMeasure& mu);
DiscreteMeasure apply_pi_measure(double t, const DiscreteMeasure& mu);

// Orthonormal frame adapted to S_g: u_i = (e_i, -g^{-1} e_i)/sqrt(2) span the
// orthogonal complement of ker S_g and satisfy S_g(u_i) = sqrt(2) e_i;
// k_i = (g e_i, e_i)/sqrt(2) span the kernel.
struct PlaneBasis {
  Rotation g;
  std::vector<std::vector<double>> vectors_u;
  std::vector<std::vector<double>> vectors_kernel;
};

PlaneBasis plane_basis(const Rotation& g);

struct ConcentrationRow {
  double radius = 0.0;
  double measured = 0.0;   // theta-fraction of {g : |x - g z| < r}
  double bound = 0.0;      // min(r/|x|, r/|z|)^beta
  double std_error = 0.0;
};

// Empirical concentration audit of theta against the ball-mass bound.
// Error: degenerate_input when x or z vanishes.
std::vector<ConcentrationRow> concentration_audit(const RotationMeasure& theta,
                                                  const std::vector<double>& x,
                                                  const std::vector<double>& z,
                                                  const std::vector<double>& radii);

}  // namespace fraclab
