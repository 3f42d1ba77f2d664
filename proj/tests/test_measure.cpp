#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "fraclab/fractal.hpp"
#include "fraclab/measure.hpp"
#include "oracles.hpp"

using namespace fraclab;
using oracles::error_code;

TEST_CASE("make_measure rejects each invariant violation with its code") {
  CHECK(error_code([] { make_measure(0, {}, {}, 0.0); }) == "dimension");
  CHECK(error_code([] { make_measure(2, {0.0, 0.0, 1.0}, {1.0}, 0.0); }) == "shape_mismatch");
  CHECK(error_code([] { make_measure(1, {}, {}, 0.0); }) == "empty_measure");
  CHECK(error_code([] { make_measure(1, {0.0}, {-1.0}, 0.0); }) == "negative_weight");
  CHECK(error_code([] { make_measure(1, {0.0, 1.0}, {0.0, 0.0}, 0.0); }) == "zero_mass");
  CHECK(error_code([] { make_measure(1, {2e6}, {1.0}, 0.0); }) == "support_bound");
  CHECK(error_code([] { make_measure(1, {0.0}, {1.0}, -0.5); }) == "bad_resolution");
  double nan = std::nan("");
  CHECK(error_code([&] { make_measure(1, {nan}, {1.0}, 0.0); }) == "support_bound");
  CHECK(error_code([&] { make_measure(1, {0.0}, {nan}, 0.0); }) == "negative_weight");
}

TEST_CASE("make_measure accumulates total mass compensated") {
  std::size_t n = 100000;
  std::vector<double> pts(n), w(n, 1.0 / double(n));
  for (std::size_t i = 0; i < n; ++i) pts[i] = double(i) / double(n);
  DiscreteMeasure mu = make_measure(1, std::move(pts), std::move(w), 1.0 / double(n));
  CHECK(std::fabs(mu.total_mass - 1.0) < 1e-13);
}

TEST_CASE("ball_mass uses closed balls and exact boundaries") {
  DiscreteMeasure mu = make_measure(1, {0.0, 1.0}, {0.25, 0.75}, 0.0);
  CHECK(ball_mass(mu, {{0.0}, 0.5}) == 0.25);
  CHECK(ball_mass(mu, {{0.0}, 1.0}) == 1.0);  // boundary atom included
  CHECK(ball_mass(mu, {{2.0}, 0.5}) == 0.0);
  CHECK(error_code([&] { ball_mass(mu, {{0.0, 0.0}, 1.0}); }) == "dimension");
  CHECK(error_code([&] { ball_mass(mu, {{0.0}, -1.0}); }) == "bad_radius");
}

TEST_CASE("middle-thirds ball masses are bitwise dyadic") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 8);
  // the left third carries exactly half the mass, the left ninth a quarter
  CHECK(ball_mass(c.measure, {{1.0 / 6.0}, 1.0 / 6.0}) == 0.5);
  CHECK(ball_mass(c.measure, {{1.0 / 18.0}, 1.0 / 18.0}) == 0.25);
  CHECK(ball_mass(c.measure, {{0.5}, 0.5}) == 1.0);
}

TEST_CASE("frostman audit recovers the middle-thirds exponent") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 10);
  std::vector<double> radii;
  for (int j = 1; j <= 6; ++j) radii.push_back(std::pow(3.0, -j));
  FrostmanEstimate est = frostman_exponent(c.measure, radii, {256, 11});
  double s = std::log(2.0) / std::log(3.0);
  CHECK(est.exponent == doctest::Approx(s).epsilon(0.08));
  CHECK(est.constant > 0.0);
  CHECK(est.max_violation >= 0.0);
  CHECK(est.radii_used.size() == radii.size());
}

TEST_CASE("frostman audit error codes") {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 6);
  CHECK(error_code([&] { frostman_exponent(c.measure, {0.5, 0.25}); }) == "insufficient_scales");
  CHECK(error_code([&] { frostman_exponent(c.measure, {0.5, 0.25, 1e-9}); }) == "below_resolution");
  CHECK(error_code([&] { frostman_exponent(c.measure, {0.5, 0.25, -0.1}); }) == "bad_radius");
}

TEST_CASE("product_measure orders mu-major and multiplies weights") {
  DiscreteMeasure a = make_measure(1, {0.0, 1.0}, {0.25, 0.75}, 0.5);
  DiscreteMeasure b = make_measure(1, {10.0, 20.0}, {0.5, 0.5}, 0.25);
  DiscreteMeasure p = product_measure(a, b);
  REQUIRE(p.atom_count() == 4);
  CHECK(p.ambient_dim == 2);
  // atom order: (a0,b0), (a0,b1), (a1,b0), (a1,b1)
  CHECK(p.atom(0)[0] == 0.0);
  CHECK(p.atom(0)[1] == 10.0);
  CHECK(p.atom(1)[1] == 20.0);
  CHECK(p.atom(2)[0] == 1.0);
  CHECK(p.weights[0] == 0.125);
  CHECK(p.weights[3] == 0.375);
  CHECK(p.total_mass == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.resolution == 0.5);  // coarser factor wins
  REQUIRE(p.factors.size() == 2);
  CHECK(p.factors[0].ambient_dim == 1);
  CHECK(error_code([&] { product_measure(a, b, 3); }) == "product_too_large");
}

TEST_CASE("nested products flatten their factor lists") {
  DiscreteMeasure a = make_measure(1, {0.0, 1.0}, {0.5, 0.5}, 0.5);
  DiscreteMeasure p2 = product_measure(a, a);
  DiscreteMeasure p4 = product_measure(p2, p2);
  CHECK(p4.ambient_dim == 4);
  CHECK(p4.factors.size() == 4);
  for (const DiscreteMeasure& f : p4.factors) CHECK(f.ambient_dim == 1);
}

TEST_CASE("pushforward preserves mass exactly and drops factors") {
  ConstructedSet c = build_cantor(0.7, 6);
  DiscreteMeasure p = product_measure(c.measure, c.measure);
  REQUIRE(!p.factors.empty());
  DiscreteMeasure img = pushforward(p, 1, [](const double* x, double* y) { y[0] = x[0] - x[1]; });
  CHECK(img.ambient_dim == 1);
  CHECK(img.atom_count() == p.atom_count());
  CHECK(img.total_mass == doctest::Approx(p.total_mass).epsilon(1e-15));
  CHECK(img.factors.empty());
  CHECK(img.resolution == p.resolution);

  DiscreteMeasure img2 = pushforward(
      p, 1, [](const double* x, double* y) { y[0] = x[0]; }, 0.125);
  CHECK(img2.resolution == 0.125);
}

TEST_CASE("pushforward convenience overload rejects ragged outputs") {
  DiscreteMeasure mu = make_measure(1, {0.0, 1.0}, {0.5, 0.5}, 0.0);
  std::size_t calls = 0;
  auto ragged = [&](const double* x, int) {
    ++calls;
    return calls == 1 ? std::vector<double>{x[0]} : std::vector<double>{x[0], 0.0};
  };
  CHECK(error_code([&] { pushforward(mu, ragged); }) == "map_dimension");
}

TEST_CASE("pushforward revalidates the image") {
  DiscreteMeasure mu = make_measure(1, {0.0}, {1.0}, 0.0);
  CHECK(error_code([&] {
          pushforward(mu, 1, [](const double*, double* y) { y[0] = 2e6; });
        }) == "support_bound");
}

TEST_CASE("lower derivative density of the uniform grid is order one") {
  DiscreteMeasure grid = uniform_grid_1d(4096);
  double dens = lower_derivative_density(grid, {0.5}, {0.25, 0.125, 0.0625});
  CHECK(dens == doctest::Approx(1.0).epsilon(0.05));
  CHECK(error_code([&] { lower_derivative_density(grid, {0.5}, {1e-9}); }) == "below_resolution");
  CHECK(error_code([&] { lower_derivative_density(grid, {0.5, 0.5}, {0.25}); }) == "dimension");
}

TEST_CASE("subsample is seed-deterministic and mass-preserving") {
  ConstructedSet c = build_cantor(0.6, 10);
  DiscreteMeasure s1 = subsample(c.measure, 500, 42);
  DiscreteMeasure s2 = subsample(c.measure, 500, 42);
  DiscreteMeasure s3 = subsample(c.measure, 500, 43);
  REQUIRE(s1.atom_count() == 500);
  CHECK(std::memcmp(s1.points.data(), s2.points.data(), sizeof(double) * s1.points.size()) == 0);
  CHECK(s1.total_mass == doctest::Approx(c.measure.total_mass).epsilon(1e-12));
  CHECK(std::memcmp(s1.points.data(), s3.points.data(), sizeof(double) * s1.points.size()) != 0);
  DiscreteMeasure p = product_measure(c.measure, c.measure);
  CHECK(subsample(p, 100, 1).factors.empty());
}

TEST_CASE("bounding_diameter is the box diagonal") {
  DiscreteMeasure mu = make_measure(2, {0.0, 0.0, 3.0, 4.0}, {0.5, 0.5}, 0.0);
  CHECK(bounding_diameter(mu) == doctest::Approx(5.0).epsilon(1e-15));
}
