#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/dimension.hpp"
#include "fraclab/fractal.hpp"
#include "oracles.hpp"

using namespace fraclab;
using oracles::error_code;

TEST_CASE("middle-thirds box counts are bitwise 2^j at 3^-j") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 12);
  for (int j = 1; j <= 12; ++j) {
    CHECK(box_count(c.measure.points, 1, std::pow(3.0, -j)) == (std::size_t(1) << j));
  }
}

TEST_CASE("middle-thirds box dimension lands on log 2 / log 3") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 12);
  std::vector<double> scales;
  for (int j = 1; j <= 12; ++j) scales.push_back(std::pow(3.0, -j));
  ScalingFit fit = box_dimension(c.measure, scales);
  CHECK(std::fabs(fit.slope - std::log(2.0) / std::log(3.0)) <= 0.05);
  CHECK(fit.r_squared > 0.999);
  CHECK(fit.counts.size() == scales.size());
  // the resolution rung saturates at the atom count and must leave the fit
  CHECK(fit.scale_window.first > std::pow(3.0, -12));
  CHECK(fit.offset_slopes.size() == 4);
  CHECK(fit.offset_spread >= 0.0);
}

TEST_CASE("box_count error codes and offset grids") {
  std::vector<double> pts = {0.05, 0.15, 0.85};
  CHECK(box_count(pts, 1, 0.1) == 3);
  double off = 0.5;
  CHECK(box_count(pts, 1, 0.1, &off) >= 2);  // shifted grid may merge 0.05/0.15
  CHECK(error_code([&] { box_count(pts, 1, -1.0); }) == "bad_scales");
  CHECK(error_code([&] { box_count({}, 1, 0.1); }) == "empty_set");
  CHECK(error_code([&] { box_count(pts, 5, 0.1); }) == "unsupported_dimension");
  std::vector<double> wide = {-1e6, -1e6, 1e6, 1e6};
  CHECK(error_code([&] { box_count(wide, 2, 1e-4); }) == "scale_overflow");
}

TEST_CASE("box_dimension validates its scale ladder") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 8);
  CHECK(error_code([&] { box_dimension(c.measure, {0.3, 0.1, 0.03}); }) == "insufficient_scales");
  CHECK(error_code([&] { box_dimension(c.measure, {0.3, 0.3, 0.1, 0.03}); }) == "bad_scales");
  CHECK(error_code([&] { box_dimension(c.measure, {0.3, 0.1, 0.03, 1e-9}); }) ==
        "below_resolution");
}

TEST_CASE("covered-volume verdicts separate area from null sets") {
  DiscreteMeasure g1 = uniform_grid_1d(64);
  DiscreteMeasure plane = product_measure(g1, g1);
  CHECK(lebesgue_positivity(plane).verdict == "positive");

  ConstructedSet thin = build_product(build_cantor(0.5, 6), build_cantor(0.5, 6));
  CHECK(lebesgue_positivity(thin.measure).verdict == "null");
}

TEST_CASE("energy detector brackets the construction dimension") {
  std::vector<double> grid;
  for (double s = 0.40; s <= 0.901; s += 0.05) grid.push_back(s);

  ConstructedSet mid = build_cantor_ratio(1.0 / 3.0, 12);
  EnergyDimension e = energy_dimension(mid, grid);
  CHECK(std::fabs(e.value - std::log(2.0) / std::log(3.0)) <= 0.05);
  CHECK(e.flag.empty());
  CHECK(e.s_grid.size() == e.growth.size());

  ConstructedSet full = build_cantor(1.0, 12);
  EnergyDimension u = energy_dimension(full, grid);
  CHECK(u.value >= 0.9);
}

TEST_CASE("energy detector edge cases") {
  ConstructedSet single;
  single.measure = make_measure(1, {0.5}, {1.0}, 0.1);
  single.provenance.kind = "central_cantor";
  single.provenance.dimension_target = 0.5;
  single.provenance.level = 5;
  EnergyDimension e = energy_dimension(single, {0.3, 0.5});
  CHECK(e.value == 0.0);
  CHECK(e.flag == "zero_dimensional");

  ConstructedSet shallow = build_cantor(0.5, 1);
  CHECK(error_code([&] { energy_dimension(shallow, {0.3, 0.5}); }) == "no_level_sweep");
}

TEST_CASE("two-atom energy has the closed value for every s") {
  DiscreteMeasure mu = make_measure(1, {0.0, 1.0}, {0.5, 0.5}, 0.0);
  for (double s : {0.3, 0.5, 0.9}) {
    SpatialEnergy e = riesz_energy_spatial(mu, s);
    CHECK(e.value == 0.5);
    CHECK(e.clamped_pairs == 0);
    CHECK(!e.infinite);
  }
}

TEST_CASE("near pairs clamp to the resolution and report it") {
  DiscreteMeasure mu = make_measure(1, {0.0, 0.05}, {0.5, 0.5}, 0.1);
  SpatialEnergy e = riesz_energy_spatial(mu, 0.5);
  CHECK(e.clamped_pairs == 1);
  CHECK(e.value == doctest::Approx(0.5 * std::pow(0.1, -0.5)).epsilon(1e-12));

  DiscreteMeasure coincident = make_measure(1, {0.3, 0.3}, {0.5, 0.5}, 0.0);
  SpatialEnergy inf = riesz_energy_spatial(coincident, 0.5);
  CHECK(inf.infinite);
}

TEST_CASE("uniform interval energy approaches the closed form") {
  DiscreteMeasure grid = uniform_grid_1d(4096);
  SpatialEnergy e = riesz_energy_spatial(grid, 0.5);
  // grid discretization converges from below at rate ~ m^{s-1}
  CHECK(e.value == doctest::Approx(oracles::uniform_energy_half()).epsilon(0.03));
  CHECK(e.value < oracles::uniform_energy_half());

  CHECK(error_code([&] { riesz_energy_spatial(grid, 1.0); }) == "bad_exponent");
  CHECK(error_code([&] { riesz_energy_spatial(grid, -0.5); }) == "bad_exponent");
}
