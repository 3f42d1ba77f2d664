#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fraclab/fractal.hpp"
#include "fraclab/spectral.hpp"
#include "oracles.hpp"

using namespace fraclab;
using oracles::error_code;

TEST_CASE("transform of a point mass is a pure phase") {
  DiscreteMeasure mu = make_measure(1, {0.3}, {0.6}, 0.0);
  for (double xi : {0.0, 0.7, 2.3, -4.1}) {
    std::complex<double> expect = 0.6 * std::exp(std::complex<double>(0.0, -2.0 * kPi * xi * 0.3));
    std::complex<double> got = fourier_at(mu, {xi});
    CHECK(std::abs(got - expect) <= 1e-14);
  }
}

TEST_CASE("uniform grid transform matches the Dirichlet kernel") {
  DiscreteMeasure mu = uniform_grid_1d(64);
  for (double xi : {0.5, 1.7, 7.3, 31.9}) {
    CHECK(std::abs(fourier_at(mu, {xi})) ==
          doctest::Approx(oracles::grid_transform_abs(64, xi)).epsilon(1e-12));
  }
}

TEST_CASE("factored transform equals the atom-walk transform") {
  ConstructedSet q = build_product(build_cantor(0.6, 5), build_cantor(0.8, 4));
  DiscreteMeasure flat = q.measure;
  flat.factors.clear();
  REQUIRE(!q.measure.factors.empty());
  const double probes[][2] = {{0.3, 1.7}, {5.5, 2.25}, {40.1, 13.7}};
  for (const auto& p : probes) {
    std::complex<double> a = fourier_at(q.measure, p);
    std::complex<double> b = fourier_at(flat, p);
    CHECK(std::abs(a - b) <= 1e-10);
  }
}

TEST_CASE("sphere average of a point mass is area times squared mass") {
  DiscreteMeasure mu = make_measure(2, {0.4, -0.2}, {0.7}, 0.0);
  CHECK(spherical_average(mu, 5.0) == doctest::Approx(sphere_area(2) * 0.49).epsilon(1e-12));
  CHECK(error_code([&] { spherical_average(mu, 1.0); }) == "below_valid_range");
}

TEST_CASE("sphere average in d=1 is the two-point sum") {
  DiscreteMeasure mu = uniform_grid_1d(32);
  double r = 3.7;
  double amp = oracles::grid_transform_abs(32, r);
  CHECK(spherical_average(mu, r) == doctest::Approx(2.0 * amp * amp).epsilon(1e-12));
}

TEST_CASE("circle spectrum follows the Bessel law at its antinodes") {
  DiscreteMeasure circ = circle_measure(4096);
  for (double r : {8.125, 16.125, 32.125}) {
    CHECK(spherical_average(circ, r) ==
          doctest::Approx(oracles::circle_sigma(r)).epsilon(1e-6));
  }
  CHECK(spherical_node_count(circ, 200.0) > spherical_node_count(circ, 5.0));
}

TEST_CASE("shell integrals are exact for constant spectra") {
  DiscreteMeasure atom = make_measure(2, {0.3, 0.4}, {1.0}, 0.0);

  MonteCarloValue shell = shell_l2(atom, 2.0, 4.0);
  CHECK(shell.value == doctest::Approx(kPi * 12.0).epsilon(1e-9));
  CHECK(shell.std_error <= 1e-9);
  CHECK(shell.samples >= 4096);

  // annulus convention: raw integral times r^{1-d}; width-1 annuli in the
  // plane then read 4 pi regardless of r
  MonteCarloValue ann = annulus_average(atom, 10.0);
  CHECK(ann.value == doctest::Approx(4.0 * kPi).epsilon(1e-9));
  CHECK(error_code([&] { annulus_average(atom, 2.0, 1.0); }) == "below_valid_range");
  CHECK(error_code([&] { annulus_average(atom, 10.0, -1.0); }) == "bad_radius");

  MonteCarloValue cum = cumulative_spectrum(atom, 8.0);
  CHECK(cum.value == doctest::Approx(kPi * 64.0).epsilon(1e-9));

  CHECK(error_code([&] { shell_l2(atom, 4.0, 2.0); }) == "bad_radius");
}

TEST_CASE("monte carlo shells are replay-deterministic") {
  ConstructedSet c = build_cantor(0.7, 6);
  DiscreteMeasure sq = product_measure(c.measure, c.measure);
  McOptions opt;
  opt.seed = 99;
  MonteCarloValue a = shell_l2(sq, 2.0, 4.0, opt);
  MonteCarloValue b = shell_l2(sq, 2.0, 4.0, opt);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.samples == b.samples);
}

TEST_CASE("rotation-averaged spectrum reduces to the sphere average") {
  DiscreteMeasure atom = make_measure(2, {0.3, 0.1}, {0.8}, 0.0);
  RotationMeasure sub = subgroup_rotation_measure(2, 8, 1);
  CHECK(sigma_theta(atom, sub, {3.0, 4.0}) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(error_code([&] { sigma_theta(atom, sub, {0.5, 0.5}); }) == "below_valid_range");

  ConstructedSet c = build_cantor(0.5, 4);
  DiscreteMeasure sq = product_measure(c.measure, c.measure);
  RotationMeasure haar = haar_rotation_measure(2, 1024, 11);
  double r = 6.5;
  double avg = sigma_theta(sq, haar, {r, 0.0});
  double ref = spherical_average(sq, r) / sphere_area(2);
  CHECK(avg == doctest::Approx(ref).epsilon(0.15));
}

TEST_CASE("energy constant hits its closed values") {
  CHECK(riesz_constant(1, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(riesz_constant(2, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(riesz_constant(2, 0.5) > 0.0);
}

TEST_CASE("dual-route energy agrees on the uniform interval") {
  DiscreteMeasure grid = uniform_grid_1d(512);
  EnergyReport rep = riesz_energy_fourier(grid, 0.5);
  CHECK(rep.constant_used == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.mollification_width == doctest::Approx(1.0 / 512.0).epsilon(1e-12));
  CHECK(rep.fourier_value == doctest::Approx(oracles::uniform_energy_half()).epsilon(0.02));
  CHECK(rep.spatial_value == doctest::Approx(oracles::uniform_energy_half()).epsilon(0.02));
  CHECK(rep.relative_gap <= 0.1);
  CHECK(rep.plug_fraction > 0.0);
  CHECK(rep.plug_fraction < 1.0);
  CHECK(!rep.truncation_dominated);
  CHECK(rep.quadrature_nodes > 0);
}

TEST_CASE("dual-route energy agrees on an atomic cascade") {
  ConstructedSet c = build_cantor(0.5, 10);
  EnergyReport rep = riesz_energy_fourier(c.measure, 0.35);
  CHECK(rep.relative_gap <= 0.15);
  CHECK(rep.spatial_value > 0.0);
}

TEST_CASE("directional and cone averages of a point mass are volumes") {
  DiscreteMeasure atom = make_measure(4, {0.1, 0.2, 0.3, 0.4}, {1.0}, 0.0);
  RotationMeasure haar = haar_rotation_measure(2, 64, 5);

  double R = 4.0;
  MonteCarloValue dir = directional_decay(atom, haar, R);
  CHECK(dir.value == doctest::Approx(3.0 * kPi * R * R).epsilon(1e-9));
  CHECK(error_code([&] { directional_decay(atom, haar, 0.9); }) == "below_valid_range");

  // cone measure integrates t^{n-1} dt over [1,2] against both spheres
  CHECK(cone_average(atom, R) == doctest::Approx(3.0 * kPi).epsilon(1e-12));
  CHECK(error_code([&] { cone_average(atom, 1.0); }) == "below_valid_range");
}

TEST_CASE("separable cone path equals the node-pair loop") {
  ConstructedSet a = build_product(build_cantor(0.5, 2), build_cantor(0.5, 2));
  ConstructedSet b = build_product(build_cantor(0.5, 2), build_cantor(0.5, 2));
  ConstructedSet q = build_product(a, b);
  DiscreteMeasure flat = q.measure;
  flat.factors.clear();
  double sep = cone_average(q.measure, 2.5);
  double gen = cone_average(flat, 2.5);
  CHECK(sep == doctest::Approx(gen).epsilon(1e-10));
}
