#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/measure.hpp"
#include "fraclab/rotation.hpp"

namespace fraclab {

// mu^(xi) = sum_j w_j exp(-2 pi i xi . x_j), compensated summation. When the
// measure carries a product factorization the transform is evaluated as the
// product of factor transforms over the coordinate split, which is exact and
// turns 10^6-atom products into a few hundred flops.
std::complex<double> fourier_at(const DiscreteMeasure& mu, const double* xi);
std::complex<double> fourier_at(const DiscreteMeasure& mu, const std::vector<double>& xi);

struct SpectralProfile {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> std_errors;  // zero for deterministic quadratures
  std::string kind;                // "spherical" | "annulus" | "cone" | "directional"
  std::size_t quadrature_nodes = 0;
};

struct SphereQuadrature {
  std::size_t min_nodes = 0;      // 0 = kind default (64 for d=2, 512 for d=3)
  std::size_t max_nodes = 20000;  // cap for the d=3 spiral (bandwidth may exceed it)
};

// sigma(mu)(r) = integral of |mu^(r v)|^2 over the unit sphere (unnormalized
// surface measure, so a single atom gives sphere_area * mass^2). d in {1,2,3};
// d=2 uses a uniform angle grid sized to the product of r and the support
// diameter (trapezoid rule on a periodic band-limited integrand), d=3 a
// Fibonacci spiral. Error below_valid_range for r <= 1.
double spherical_average(const DiscreteMeasure& mu, double r, const SphereQuadrature& q = {});
std::size_t spherical_node_count(const DiscreteMeasure& mu, double r, const SphereQuadrature& q = {});

struct McOptions {
  std::size_t initial = 4096;
  std::size_t cap = std::size_t(1) << 17;
  double target_rel_error = 0.05;
  std::uint64_t seed = 7;
};

// Monte Carlo integral of |mu^|^2 over the annulus {r-width < |xi| < r+width},
// times r^{1-d} (raw-integral convention: a single atom gives annulus volume
// times r^{1-d} times mass^2). Samples double until the standard error meets
// the target or the cap. Error below_valid_range for r <= 1 + width.
MonteCarloValue annulus_average(const DiscreteMeasure& mu, double r, double width = 1.0,
                                const McOptions& opt = {});

// Plain integral of |mu^|^2 over {a < |xi| < b} (no radial weight).
MonteCarloValue shell_l2(const DiscreteMeasure& mu, double a, double b, const McOptions& opt = {});

// Integral of |mu^|^2 over the ball {|xi| <= R}, assembled from dyadic shells.
MonteCarloValue cumulative_spectrum(const DiscreteMeasure& mu, double R, const McOptions& opt = {});

// sigma_theta(nu)(xi) = sum_g w_g |nu^(g^{-1} xi)|^2 over the rotation cloud.
// For Haar theta this equals sigma(nu)(|xi|) / sphere_area(n) in expectation.
// Error below_valid_range for |xi| <= 1.
double sigma_theta(const DiscreteMeasure& nu, const RotationMeasure& theta,
                   const std::vector<double>& xi);

// c(d, s) in I_s(mu) = c(d,s) * integral |mu^(xi)|^2 |xi|^{s-d} d xi.
double riesz_constant(int d, double s);

struct FreqQuadrature {
  double xi_min = 0.02;            // below this |mu^|^2 is modeled as mass^2 (with a
                                   // second-order covariance correction) and integrated exactly
  double xi_max = 0.0;             // 0 = auto: 1/resolution when recorded, else 256
  std::size_t radial_per_decade = 48;
  bool mollify = true;             // Gaussian factor exp(-4 pi^2 sigma^2 |xi|^2), sigma = resolution
};

struct EnergyReport {
  double s = 0.0;
  double spatial_value = 0.0;      // pair sum of the mollified kernel (raw clamped
                                   // sum when mollify = false)
  double fourier_value = 0.0;
  double constant_used = 0.0;
  double relative_gap = 0.0;       // |fourier - spatial| / spatial
  double mollification_width = 0.0;
  double plug_fraction = 0.0;      // share contributed by the [0, xi_min] model
  double tail_fraction = 0.0;      // extrapolated share beyond xi_max
  bool truncation_dominated = false;  // tail_fraction > 0.2 (never silently dropped)
  std::size_t clamped_pairs = 0;   // pairs inside the smoothing width
  std::size_t quadrature_nodes = 0;
};

// Dual-route Riesz energy of the Gaussian-smoothed copy mu * phi_sigma with
// sigma = resolution. Both routes price exactly that object: the spatial side
// is the pair sum of the smoothed kernel E|x_i - x_j + sqrt(2) sigma G|^{-s}
// (diagonal included, finite after smoothing), the frequency side is c(d,s) *
// int |mu^|^2 |phi^|^2 |xi|^{s-d}. Smoothing kills the atomic-lattice aliases
// above 1/resolution, so the routes compare on the scales the measure
// actually represents; with mollify = false the spatial side falls back to
// the raw clamped sum and atomic inputs will NOT reconcile (|mu^| does not
// decay). The tail beyond xi_max is estimated from the fitted decay of the
// last decade and reported, flagged when it dominates.
EnergyReport riesz_energy_fourier(const DiscreteMeasure& mu, double s,
                                  const FreqQuadrature& q = {});

// Monte Carlo of the rotation-averaged annulus integral
//   int int_{R<=|xi|<=2R} |mu^(xi, -g^{-1} xi)|^2 d xi d theta(g)
// for mu on R^{2n}, theta on O(n). Error below_valid_range for R <= 1.
MonteCarloValue directional_decay(const DiscreteMeasure& mu, const RotationMeasure& theta,
                                  double R, const McOptions& opt = {});

struct ConeQuadrature {
  std::size_t t_nodes = 16;
  SphereQuadrature sphere;
};

// Quadrature of |mu^(R t u, R t v)|^2 against the cone measure
//   d gamma = (1/A_{n-1}) t^{n-1} d sigma(u) d sigma(v) dt,  t in [1,2],
// normalized so that for Haar theta
//   int int_{R<=|xi|<=2R} |mu^(xi, -g^{-1} xi)|^2 d xi d theta = R^n * cone_average(R).
// Product measures whose factorization splits at coordinate n are evaluated
// separably (the double sphere quadrature factorizes), anything else pays the
// full node-pair loop. Error below_valid_range for R <= 1.
double cone_average(const DiscreteMeasure& mu, double R, const ConeQuadrature& q = {});

}  // namespace fraclab
