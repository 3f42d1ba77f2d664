#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/distance.hpp"
#include "fraclab/fractal.hpp"
#include "oracles.hpp"

using namespace fraclab;
using oracles::error_code;

TEST_CASE("self-distance histogram of the interval matches 2(1-t)") {
  DiscreteMeasure grid = uniform_grid_1d(2000);
  BinSpec bins;
  bins.width = 0.05;
  DistanceMeasure dm = distance_measure(grid, grid, bins);

  CHECK(dm.diagonal_mass == doctest::Approx(1.0 / 2000.0).epsilon(1e-12));
  CHECK(dm.source_mass == doctest::Approx(1.0).epsilon(1e-12));

  double binned = dm.diagonal_mass;
  for (std::size_t i = 0; i + 1 < dm.bin_edges.size(); ++i) {
    double mid = 0.5 * (dm.bin_edges[i] + dm.bin_edges[i + 1]);
    double density = dm.masses[i] / bins.width;
    double want = oracles::uniform_chord_density(mid);
    if (want >= 0.05) CHECK(std::fabs(density - want) <= 0.05 * want);
    binned += dm.masses[i];
  }
  CHECK(binned == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circle chord histogram matches the arcsine law") {
  DiscreteMeasure circ = circle_measure(4096);
  BinSpec bins;
  bins.width = 0.05;
  DistanceMeasure dm = distance_measure(circ, circ, bins);
  for (std::size_t i = 0; i + 1 < dm.bin_edges.size(); ++i) {
    double a = dm.bin_edges[i], b = dm.bin_edges[i + 1];
    if (b > 2.0) break;  // chords live in [0, 2]
    double want = oracles::circle_chord_cdf(b) - oracles::circle_chord_cdf(a);
    if (want >= 0.005) CHECK(std::fabs(dm.masses[i] - want) <= 0.08 * want);
  }
}

TEST_CASE("cross-distance histograms have no diagonal and validate input") {
  DiscreteMeasure atom = make_measure(1, {0.0}, {1.0}, 0.0);
  DiscreteMeasure grid = uniform_grid_1d(100);
  BinSpec bins;
  bins.width = 0.05;
  DistanceMeasure dm = distance_measure(atom, grid, bins);
  CHECK(dm.diagonal_mass == 0.0);
  CHECK(dm.source_mass == doctest::Approx(1.0).epsilon(1e-12));

  DiscreteMeasure plane = product_measure(grid, grid);
  CHECK(error_code([&] { distance_measure(atom, plane, bins); }) == "dimension");
  BinSpec bad;
  bad.width = 0.0;
  CHECK(error_code([&] { distance_measure(grid, grid, bad); }) == "bad_bins");
  BinSpec fine;
  fine.width = 1e-5;
  CHECK(error_code([&] { distance_measure(grid, grid, fine); }) == "bins_too_fine");
}

TEST_CASE("l2 indicator separates densities from spikes") {
  DiscreteMeasure grid = uniform_grid_1d(2000);
  BinSpec bins;
  bins.width = 0.02;
  L2Indicator smooth = distance_l2_indicator(distance_measure(grid, grid, bins));
  // int 4(1-t)^2 dt = 4/3
  CHECK(smooth.value == doctest::Approx(4.0 / 3.0).epsilon(0.05));
  CHECK(std::fabs(smooth.refinement_ratio - 1.0) <= 0.15);

  DiscreteMeasure pair = make_measure(1, {0.0, 1.0}, {0.5, 0.5}, 0.0);
  BinSpec coarse;
  coarse.width = 0.3;
  L2Indicator spike = distance_l2_indicator(distance_measure(pair, pair, coarse));
  CHECK(spike.refinement_ratio == doctest::Approx(2.0).epsilon(0.01));

  DistanceMeasure degenerate;
  degenerate.bin_edges = {0.0, 1.0};
  degenerate.masses = {1.0};
  degenerate.source_mass = 1.0;
  CHECK(error_code([&] { distance_l2_indicator(degenerate); }) == "degenerate_bins");
}

TEST_CASE("distance pairing reproduces the log-2 integral") {
  // delta(mu) = indicator of [1,2] when mu pairs an atom at 0 with uniform
  // mass on [1,2]; against itself with the t^{-1} weight the pairing is ln 2
  DiscreteMeasure atom = make_measure(1, {0.0}, {1.0}, 0.0);
  DiscreteMeasure base = uniform_grid_1d(2000);
  DiscreteMeasure shifted = pushforward(
      base, 1, [](const double* in, double* out) { out[0] = in[0] + 1.0; }, base.resolution);
  BinSpec bins;
  bins.width = 0.01;
  bins.t_max = 2.5;
  DistanceMeasure dm = distance_measure(atom, shifted, bins);
  double got = weighted_distance_pairing(dm, dm, 2);
  CHECK(got == doctest::Approx(std::log(2.0)).epsilon(0.02));

  BinSpec other;
  other.width = 0.02;
  other.t_max = 2.5;
  DistanceMeasure dm2 = distance_measure(atom, shifted, other);
  CHECK(error_code([&] { weighted_distance_pairing(dm, dm2, 2); }) == "bin_mismatch");
}
