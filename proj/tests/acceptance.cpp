// Acceptance gate: twelve end-to-end checks, one line of verdict each.
// Every check recomputes its inputs from the public API and judges them
// against closed forms or stated tolerance bands; exit code = failure count.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fraclab/common.hpp"
#include "fraclab/dimension.hpp"
#include "fraclab/distance.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/fractal.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/rotation.hpp"
#include "fraclab/spectral.hpp"
#include "oracles.hpp"

using namespace fraclab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

int g_failures = 0;

void run_check(const char* tag, const std::function<Verdict()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("threw: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++g_failures;
  std::printf("[%s] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", tag, v.detail.c_str(), secs);
  std::fflush(stdout);
}

// --- spec builders shared by the checks -------------------------------------

FractalSpec cantor_spec(double s, int level) {
  FractalSpec f;
  f.kind = "central_cantor";
  f.dimension_target = s;
  f.level = level;
  return f;
}

FractalSpec product_spec(FractalSpec a, FractalSpec b) {
  FractalSpec f;
  f.kind = "product";
  f.level = std::max(a.level, b.level);
  f.children = {std::move(a), std::move(b)};
  return f;
}

FractalSpec pow4_spec(const FractalSpec& c) {
  return product_spec(product_spec(c, c), product_spec(c, c));
}

FractalSpec embed_spec(FractalSpec c) {
  FractalSpec f;
  f.kind = "affine_embed";
  f.level = c.level;
  f.children = {std::move(c)};
  return f;
}

FractalSpec sharp_A_spec(double s, int level) {
  FractalSpec f;
  f.kind = "sharpness_A";
  f.dimension_target = s;
  f.level = level;
  return f;
}

std::vector<double> geometric_scales(double base, int from, int to) {
  std::vector<double> s;
  for (int k = from; k <= to; ++k) s.push_back(std::pow(base, -k));
  return s;
}

std::vector<double> half_octave_radii(double lo, double hi) {
  std::vector<double> r;
  for (double x = lo; x < hi * 1.0001; x *= std::sqrt(2.0)) r.push_back(x);
  return r;
}

// --- image-side helpers (same policies the scenario runner applies) ---------

DiscreteMeasure capped(const DiscreteMeasure& mu, std::size_t cap, std::uint64_t seed) {
  if (mu.atom_count() <= cap) return mu;
  return subsample(mu, cap, seed);
}

std::vector<double> frostman_radii(const DiscreteMeasure& mu) {
  std::vector<double> radii;
  for (double r = 0.5; r > 1.5 * mu.resolution && radii.size() < 8; r *= 0.5) radii.push_back(r);
  while (radii.size() < 4) radii.push_back(radii.empty() ? 0.5 : radii.back() * 0.5);
  return radii;
}

ScalingFit image_box_fit(const DiscreteMeasure& image, const std::vector<double>& scales,
                         std::size_t cap, std::uint64_t sub_seed) {
  DiscreteMeasure im = capped(image, cap, sub_seed);
  std::vector<double> usable;
  for (double s : scales) {
    if (s >= im.resolution) usable.push_back(s);
  }
  return box_dimension(im, usable);
}

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

double fit_slope(const std::vector<double>& r, const std::vector<double>& v) {
  std::vector<double> lr, lv;
  for (std::size_t i = 0; i < r.size(); ++i) {
    lr.push_back(std::log(r[i]));
    lv.push_back(std::log(std::max(v[i], 1e-300)));
  }
  return fit_line(lr, lv).slope;
}

// --- the twelve checks -------------------------------------------------------

// 1. Dual-route fractional energies: spatial pair sum and weighted spectral
//    integral agree within 10% on a six-measure battery, and the uniform
//    interval at s = 1/2 lands on the closed form 8/3 from both routes.
Verdict check_energy_battery() {
  struct Pair {
    const char* label;
    DiscreteMeasure mu;
    double s;
  };
  ConstructedSet c08 = build_cantor(0.8, 6);
  std::vector<Pair> battery;
  battery.push_back({"uniform@0.5", uniform_grid_1d(2048), 0.5});
  battery.push_back({"uniform@0.8", uniform_grid_1d(2048), 0.8});
  battery.push_back({"cantor_third@0.4", build_cantor_ratio(1.0 / 3.0, 10).measure, 0.4});
  battery.push_back({"cantor_0.5@0.35", build_cantor(0.5, 10).measure, 0.35});
  battery.push_back({"cantor_0.8_sq@1.2", product_measure(c08.measure, c08.measure), 1.2});
  battery.push_back({"circle@0.5", circle_measure(1024), 0.5});

  const auto t0 = std::chrono::steady_clock::now();
  double max_gap = 0.0;
  std::string worst = "";
  double spatial_gap = 0.0, fourier_gap = 0.0;
  for (const Pair& p : battery) {
    EnergyReport rep = riesz_energy_fourier(p.mu, p.s);
    if (rep.relative_gap > max_gap) {
      max_gap = rep.relative_gap;
      worst = p.label;
    }
    if (std::string(p.label) == "uniform@0.5") {
      spatial_gap = std::fabs(rep.spatial_value / oracles::uniform_energy_half() - 1.0);
      fourier_gap = std::fabs(rep.fourier_value / oracles::uniform_energy_half() - 1.0);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Verdict v;
  v.pass = max_gap <= 0.10 && spatial_gap <= 0.10 && fourier_gap <= 0.10 && secs < 120.0;
  v.detail = fmt("six-pair battery max route gap %.4f (worst %s) <= 0.10; uniform s=1/2 vs 8/3:"
                 " spatial %.4f, spectral %.4f <= 0.10; %.1f s < 120 s",
                 max_gap, worst.c_str(), spatial_gap, fourier_gap, secs);
  return v;
}

// 2. Box counts of the level-12 middle-thirds set are exactly 2^j at scale
//    3^-j, and the fitted slope sits within 0.05 of log 2 / log 3.
Verdict check_box_dimension() {
  ConstructedSet c = build_cantor_ratio(1.0 / 3.0, 12);
  bool counts_exact = true;
  int bad_j = 0;
  for (int j = 1; j <= 12; ++j) {
    const double count = box_count(c.measure.points, 1, std::pow(3.0, -j));
    if (count != double(std::int64_t(1) << j)) {
      counts_exact = false;
      bad_j = j;
      break;
    }
  }
  ScalingFit fit = box_dimension(c.measure, geometric_scales(3.0, 1, 12));
  const double target = std::log(2.0) / std::log(3.0);
  Verdict v;
  v.pass = counts_exact && std::fabs(fit.slope - target) <= 0.05;
  v.detail = counts_exact
                 ? fmt("counts 2^j exact for j=1..12; slope %.4f within 0.6309 +- 0.05", fit.slope)
                 : fmt("count mismatch at scale 3^-%d", bad_j);
  return v;
}

// 3. Equality case of the projection theorem: the plane-slab set with
//    s = log 2 / log 3 projects to box slope inside [1.53, 1.73] at every
//    sampled direction parameter.
Verdict check_projection_sharpness() {
  const auto t0 = std::chrono::steady_clock::now();
  const double s13 = std::log(2.0) / std::log(3.0);
  ConstructedSet A = build_from_spec(sharp_A_spec(s13, 5));
  const std::vector<double> scales = geometric_scales(3.0, 1, 5);
  const std::uint64_t seed = 1;
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < 20; ++k) {
    const double t = 0.5 + 1.5 * double(k) / 19.0;
    DiscreteMeasure image = apply_pi_measure(t, A.measure);
    const double slope = image_box_fit(image, scales, 100000, derive_seed(seed, k)).slope;
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Verdict v;
  v.pass = lo >= 1.53 && hi <= 1.73 && secs < 300.0;
  v.detail = fmt("20 projected slopes in [%.4f, %.4f], required [1.53, 1.73]; %.1f s < 300 s",
                 lo, hi, secs);
  return v;
}

// 4. Exceptionless lower bound: every one of 50 Haar rotations keeps the
//    image box slope of S_g above nominal dim - n - 0.1 on all three
//    factory sets (no exceptional rotation allowed).
Verdict check_trivial_bound() {
  const std::uint64_t seed = 1;
  const int n = 2;
  const std::vector<FractalSpec> specs = {pow4_spec(cantor_spec(0.8, 5)),
                                          pow4_spec(cantor_spec(0.7, 5)),
                                          sharp_A_spec(0.5, 4)};
  const std::vector<double> scales = geometric_scales(2.0, 2, 7);
  RotationMeasure theta = haar_rotation_measure(n, 50, derive_seed(seed, 10));
  std::size_t failures = 0;
  double min_margin = 1e300;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    ConstructedSet A = build_from_spec(specs[si]);
    const double bound = A.nominal_dimension - double(n);
    for (std::size_t k = 0; k < theta.samples.size(); ++k) {
      DiscreteMeasure image = apply_S_measure(theta.samples[k], A.measure);
      const double slope =
          image_box_fit(image, scales, 100000, derive_seed(seed, 100 * (si + 1) + k)).slope;
      min_margin = std::min(min_margin, slope - bound);
      if (slope - bound < -0.1) ++failures;
    }
  }
  Verdict v;
  v.pass = failures == 0;
  v.detail = fmt("3 sets x 50 rotations: %zu slopes under dim - 2 - 0.1, worst margin %+.4f",
                 failures, min_margin);
  return v;
}

// 5. Above the positivity threshold (nominal 3.2 > n + 1 = 3) at least 90%
//    of 50 Haar rotations give a "positive" covered-volume verdict.
Verdict check_positivity_rate() {
  const std::uint64_t seed = 1;
  ConstructedSet A = build_from_spec(pow4_spec(cantor_spec(0.8, 5)));
  RotationMeasure theta = haar_rotation_measure(2, 50, derive_seed(seed, 10));
  std::size_t positive = 0;
  for (std::size_t k = 0; k < theta.samples.size(); ++k) {
    DiscreteMeasure image = apply_S_measure(theta.samples[k], A.measure);
    DiscreteMeasure im = capped(image, 200000, derive_seed(seed, k));
    PositivityVerdict pv =
        lebesgue_positivity(im.points, im.ambient_dim, std::max(im.resolution, 0.02));
    if (pv.verdict == "positive") ++positive;
  }
  const double rate = double(positive) / double(theta.samples.size());
  Verdict v;
  v.pass = rate >= 0.90;
  v.detail = fmt("nominal 3.2 > 3: positive verdict rate %.2f >= 0.90 (%zu/50)", rate, positive);
  return v;
}

// 6. Orbit concentration on O(2): 200 randomized (x, z, r) cases all obey
//    measured <= 4 min(r/|x|, r/|z|), and the sampled fraction matches the
//    closed-form arc oracle within 3 standard errors.
Verdict check_concentration_bound() {
  const std::uint64_t seed = 2;
  const std::size_t K = 4096;
  RotationMeasure theta = haar_rotation_measure(2, K, derive_seed(seed, 10));
  std::size_t bound_breaks = 0, oracle_breaks = 0;
  double worst_ratio = 0.0;
  for (std::size_t ci = 0; ci < 200; ++ci) {
    std::mt19937_64 crng(derive_seed(seed, 1000 + ci));
    auto rand_point = [&](double lo, double hi) {
      const double norm = lo + (hi - lo) * u01(crng);
      const double phi = 2.0 * oracles::pi * u01(crng);
      return std::vector<double>{norm * std::cos(phi), norm * std::sin(phi)};
    };
    const std::vector<double> x = rand_point(0.5, 2.0);
    const std::vector<double> z = rand_point(0.5, 2.0);
    const double r = 0.02 * std::pow(40.0, u01(crng));
    ConcentrationRow row = concentration_audit(theta, x, z, {r})[0];
    const double nx = std::hypot(x[0], x[1]);
    const double nz = std::hypot(z[0], z[1]);
    const double ratio = std::min(1.0, std::min(r / nx, r / nz));
    if (row.measured > 4.0 * ratio + 1e-12) ++bound_breaks;
    if (row.measured > 1e-12 && ratio < 1.0) {
      worst_ratio = std::max(worst_ratio, row.measured / ratio);
    }
    const double oracle = oracles::arc_fraction(nx, nz, r);
    const double se_binom = std::sqrt(std::max(oracle * (1.0 - oracle), 1e-30) / double(K));
    const double allowed = 3.0 * std::max(row.std_error, se_binom) + 1e-9;
    if (std::fabs(row.measured - oracle) > allowed) ++oracle_breaks;
  }
  Verdict v;
  v.pass = bound_breaks == 0 && oracle_breaks == 0;
  v.detail = fmt("200 cases: %zu over 4 min(r/|x|, r/|z|) (worst constant %.3f), "
                 "%zu outside 3 SE of the arc oracle",
                 bound_breaks, worst_ratio, oracle_breaks);
  return v;
}

// 7. Spherical-average decay: the embedded dimension-0.4 set decays with
//    log-log slope <= -0.4 + 0.15 over r in [4, 64], and the circle reference
//    tracks 2 pi J0(2 pi r)^2 within 5% at antinodes with slope -1 +- 0.15.
Verdict check_spherical_decay() {
  ConstructedSet A = build_from_spec(embed_spec(cantor_spec(0.4, 12)));
  const std::vector<double> radii = half_octave_radii(4.0, 64.0);
  std::vector<double> vals;
  for (double r : radii) vals.push_back(spherical_average(A.measure, r));
  const double slope = fit_slope(radii, vals);

  DiscreteMeasure circ = circle_measure(4096);
  static const int antinode_m[] = {8, 11, 16, 23, 32, 45, 64, 90, 127};
  std::vector<double> cr, cv;
  double max_rel = 0.0;
  for (int m : antinode_m) {
    const double r = 0.5 * m + 0.125;
    const double got = spherical_average(circ, r);
    max_rel = std::max(max_rel, std::fabs(got / oracles::circle_sigma(r) - 1.0));
    cr.push_back(r);
    cv.push_back(got);
  }
  const double circle_slope = fit_slope(cr, cv);
  Verdict v;
  v.pass = slope <= -0.4 + 0.15 && std::fabs(circle_slope + 1.0) <= 0.15 && max_rel <= 0.05;
  v.detail = fmt("dim-0.4 slope %.4f <= -0.25; circle slope %.4f within -1 +- 0.15, "
                 "antinode dev %.4f <= 0.05",
                 slope, circle_slope, max_rel);
  return v;
}

// 8. Rotation-averaged annulus energy of the four-fold dimension-0.7 product:
//    growth slope stays under 2n - s - beta + 0.2 with s taken from the
//    measure's own Frostman audit.  The probe radii sit on the construction's
//    log-period grid (ratio 2^{10/7} per step) inside [4, 64], below the
//    atomic shoulder at 1/resolution ~ 141, where the asymptotic slope is
//    readable instead of the log-periodic wobble.
Verdict check_directional_decay() {
  const std::uint64_t seed = 1;
  ConstructedSet A = build_from_spec(pow4_spec(cantor_spec(0.7, 5)));
  DiscreteMeasure audit = capped(A.measure, 100000, derive_seed(seed, 30));
  FrostmanEstimate frost = frostman_exponent(audit, frostman_radii(audit),
                                             CenterPolicy{256, derive_seed(seed, 31)});
  RotationMeasure haar = haar_rotation_measure(2, 2048, derive_seed(seed, 10));
  const double q = std::pow(2.0, 10.0 / 7.0);
  const std::vector<double> radii = {4.0, 4.0 * q, 4.0 * q * q};
  std::vector<double> vals;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    McOptions opt;
    opt.initial = 8192;
    opt.target_rel_error = 0.02;
    opt.seed = derive_seed(seed, 4000 + k);
    vals.push_back(directional_decay(A.measure, haar, radii[k], opt).value);
  }
  const double slope = fit_slope(radii, vals);
  const double bound = 4.0 - frost.exponent - haar.beta + 0.2;
  Verdict v;
  v.pass = slope <= bound;
  v.detail = fmt("audited s %.4f; slope %.4f <= 2n - s - beta + 0.2 = %.4f "
                 "(radii 4..%.1f in [4, 64])",
                 frost.exponent, slope, bound, radii.back());
  return v;
}

// 9. Cone identity: the rotation-averaged annulus energy equals R^n times the
//    cone quadrature within 10% at R = 4 and 16, on both factory sets.
Verdict check_cone_identity() {
  const std::uint64_t seed = 1;
  ConstructedSet P0 = build_from_spec(pow4_spec(cantor_spec(0.5, 5)));
  ConstructedSet P1 = build_from_spec(product_spec(
      product_spec(cantor_spec(0.5, 5), cantor_spec(0.5, 5)), embed_spec(cantor_spec(0.4, 8))));
  RotationMeasure haar = haar_rotation_measure(2, 4096, derive_seed(seed, 10));
  ConeQuadrature quad;
  quad.t_nodes = 96;
  quad.sphere.min_nodes = 4096;
  const double radii[2] = {4.0, 16.0};
  const ConstructedSet* sets[2] = {&P0, &P1};
  double max_dev = 0.0;
  for (int si = 0; si < 2; ++si) {
    for (int i = 0; i < 2; ++i) {
      McOptions opt;
      opt.initial = std::size_t(1) << 16;
      opt.cap = std::size_t(1) << 19;
      opt.target_rel_error = 0.01;
      opt.seed = derive_seed(seed, 6000 + 100 * si + i);
      const MonteCarloValue lhs = directional_decay(sets[si]->measure, haar, radii[i], opt);
      const double rhs = std::pow(radii[i], 2.0) * cone_average(sets[si]->measure, radii[i], quad);
      max_dev = std::max(max_dev, std::fabs(lhs.value / rhs - 1.0));
    }
  }
  Verdict v;
  v.pass = max_dev <= 0.10;
  v.detail = fmt("2 sets x R in {4, 16}: max |annulus / (R^2 cone) - 1| = %.4f <= 0.10", max_dev);
  return v;
}

// 10. Distance kit: the 10^4-atom circle's chord histogram matches the
//     closed-form law bin by bin within 5%, and the t^{-1}-weighted pairing
//     of an atom against uniform [1, 2] mass returns ln 2 +- 0.02.
Verdict check_distance_kit() {
  DiscreteMeasure circ = circle_measure(10000);
  BinSpec bins;
  bins.width = 0.05;
  DistanceMeasure dm = distance_measure(circ, circ, bins);
  double worst_rel = 0.0, worst_abs = 0.0;
  for (std::size_t i = 0; i + 1 < dm.bin_edges.size(); ++i) {
    const double lo = dm.bin_edges[i], hi = dm.bin_edges[i + 1];
    const double expected = oracles::circle_chord_cdf(hi) - oracles::circle_chord_cdf(lo);
    const double got = dm.masses[i];
    if (expected >= 1e-3) {
      worst_rel = std::max(worst_rel, std::fabs(got / expected - 1.0));
    } else {
      worst_abs = std::max(worst_abs, std::fabs(got - expected));
    }
  }

  DiscreteMeasure atom = make_measure(1, {0.0}, {1.0}, 0.0);
  DiscreteMeasure base = uniform_grid_1d(2000);
  DiscreteMeasure shifted = pushforward(
      base, 1, [](const double* in, double* out) { out[0] = in[0] + 1.0; }, base.resolution);
  BinSpec pb;
  pb.width = 0.01;
  pb.t_max = 2.5;
  DistanceMeasure pdm = distance_measure(atom, shifted, pb);
  const double pairing = weighted_distance_pairing(pdm, pdm, 2);
  const double ln2_dev = std::fabs(pairing - std::log(2.0));
  Verdict v;
  v.pass = worst_rel <= 0.05 && worst_abs <= 2e-4 && ln2_dev <= 0.02;
  v.detail = fmt("chord bins: rel dev %.4f <= 0.05 (tiny-bin abs dev %.2g); "
                 "weighted pairing %.4f = ln 2 +- 0.02",
                 worst_rel, worst_abs, pairing);
  return v;
}

// 11. Rotation sampler soundness: 10^5 planar samples stay orthogonal to
//     1e-12 with a uniform first-column angle (KS < 0.01); 2 * 10^4 samples
//     on O(3) reproduce the uniform-sphere first-column moments.
Verdict check_haar_soundness() {
  RotationMeasure theta = haar_rotation_measure(2, 100000, 5);
  double max_resid = 0.0;
  std::vector<double> angles;
  angles.reserve(theta.samples.size());
  for (const Rotation& g : theta.samples) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 2; ++k) dot += g.entry(k, i) * g.entry(k, j);
        max_resid = std::max(max_resid, std::fabs(dot - (i == j ? 1.0 : 0.0)));
      }
    }
    double a = std::atan2(g.entry(1, 0), g.entry(0, 0));
    if (a < 0.0) a += 2.0 * oracles::pi;
    angles.push_back(a);
  }
  const double ks = oracles::ks_statistic(angles, oracles::cdf_uniform_0_2pi);

  RotationMeasure theta3 = haar_rotation_measure(3, 20000, 7);
  double sum[3] = {0, 0, 0}, sumsq = 0.0;
  for (const Rotation& g : theta3.samples) {
    for (int k = 0; k < 3; ++k) sum[k] += g.entry(k, 0);
    sumsq += g.entry(0, 0) * g.entry(0, 0);
  }
  double worst_mean = 0.0;
  for (double s : sum) worst_mean = std::max(worst_mean, std::fabs(s / 20000.0));
  const double second = sumsq / 20000.0;
  Verdict v;
  v.pass = max_resid <= 1e-12 && ks < 0.01 && worst_mean <= 0.02 &&
           std::fabs(second - 1.0 / 3.0) <= 0.01;
  v.detail = fmt("orthogonality residual %.2g <= 1e-12; angle KS %.4f < 0.01 at 1e5; "
                 "O(3) first-column mean %.4f <= 0.02, second moment %.4f = 1/3 +- 0.01",
                 max_resid, ks, worst_mean, second);
  return v;
}

// 12. Determinism: rerunning a scenario with the same seed reproduces every
//     numeric aggregate to relative 1e-12.
Verdict check_determinism() {
  ScenarioConfig cfg = default_config("lemma_concentration");
  cfg.output_dir = "/tmp/fraclab_acc_a";
  std::filesystem::remove_all(cfg.output_dir);
  ExperimentRecord rec = run_scenario(cfg);
  ScenarioConfig cfg2 = cfg;
  cfg2.output_dir = "/tmp/fraclab_acc_b";
  std::filesystem::remove_all(cfg2.output_dir);
  ExperimentRecord rec2 = run_scenario(cfg2);
  double worst = 0.0;
  std::size_t compared = 0;
  for (auto it = rec.aggregates.begin(); it != rec.aggregates.end(); ++it) {
    if (!it.value().is_number() || !rec2.aggregates.contains(it.key())) continue;
    const double a = it.value().get<double>();
    const double b = rec2.aggregates[it.key()].get<double>();
    worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
    ++compared;
  }
  std::filesystem::remove_all(cfg.output_dir);
  std::filesystem::remove_all(cfg2.output_dir);
  Verdict v;
  v.pass = compared > 0 && worst <= 1e-12 && rec.pass == rec2.pass;
  v.detail = fmt("%zu aggregates replayed, worst relative drift %.2g <= 1e-12", compared, worst);
  return v;
}

}  // namespace

int main() {
  std::printf("acceptance gate: 12 checks\n");
  run_check("C1  dual-route energy battery ", check_energy_battery);
  run_check("C2  middle-thirds box counts  ", check_box_dimension);
  run_check("C3  projection equality case  ", check_projection_sharpness);
  run_check("C4  exceptionless lower bound ", check_trivial_bound);
  run_check("C5  image positivity rate     ", check_positivity_rate);
  run_check("C6  orbit concentration bound ", check_concentration_bound);
  run_check("C7  spherical-average decay   ", check_spherical_decay);
  run_check("C8  directional annulus decay ", check_directional_decay);
  run_check("C9  cone identity             ", check_cone_identity);
  run_check("C10 distance kit closed forms ", check_distance_kit);
  run_check("C11 rotation sampler soundness", check_haar_soundness);
  run_check("C12 seeded rerun determinism  ", check_determinism);
  std::printf("%d/12 checks passed\n", 12 - g_failures);
  return g_failures;
}
