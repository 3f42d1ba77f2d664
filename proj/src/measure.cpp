#include "fraclab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fraclab {

namespace {

double kahan_total(const std::vector<double>& w) {
  KahanSum s;
  for (double x : w) s.add(x);
  return s.value();
}

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

// Weight-proportional sampling of atom indices via CDF + binary search.
std::vector<std::size_t> sample_indices(const DiscreteMeasure& mu, std::size_t count,
                                        std::uint64_t seed) {
  std::vector<double> cdf(mu.atom_count());
  KahanSum acc;
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    acc.add(mu.weights[i]);
    cdf[i] = acc.value();
  }
  double total = cdf.back();
  std::mt19937_64 rng(derive_seed(seed, 0x5a3c7e1f));
  std::uniform_real_distribution<double> uni(0.0, total);
  std::vector<std::size_t> idx(count);
  for (std::size_t k = 0; k < count; ++k) {
    double u = uni(rng);
    idx[k] = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx[k] >= mu.atom_count()) idx[k] = mu.atom_count() - 1;
  }
  return idx;
}

}  // namespace

void validate_measure(const DiscreteMeasure& mu) {
  if (mu.ambient_dim < 1) fail("dimension", "ambient dimension must be >= 1");
  std::size_t n = mu.weights.size();
  if (mu.points.size() != n * std::size_t(mu.ambient_dim)) {
    fail("shape_mismatch", "points/weights size mismatch");
  }
  if (n == 0) fail("empty_measure", "measure has no atoms");
  bool any_positive = false;
  for (double w : mu.weights) {
    if (!std::isfinite(w) || w < 0.0) fail("negative_weight", "weights must be finite and >= 0");
    if (w > 0.0) any_positive = true;
  }
  if (!any_positive) fail("zero_mass", "measure has zero total mass");
  for (double x : mu.points) {
    if (!std::isfinite(x) || std::abs(x) > kSupportBound) {
      fail("support_bound", "coordinate outside [-1e6, 1e6]");
    }
  }
  if (!std::isfinite(mu.resolution) || mu.resolution < 0.0) {
    fail("bad_resolution", "resolution must be finite and >= 0");
  }
  if (!mu.factors.empty()) {
    int dsum = 0;
    for (const auto& f : mu.factors) dsum += f.ambient_dim;
    if (dsum != mu.ambient_dim) fail("shape_mismatch", "factor dimensions do not add up");
  }
}

DiscreteMeasure make_measure(int ambient_dim, std::vector<double> points,
                             std::vector<double> weights, double resolution) {
  DiscreteMeasure mu;
  mu.ambient_dim = ambient_dim;
  mu.points = std::move(points);
  mu.weights = std::move(weights);
  mu.resolution = resolution;
  validate_measure(mu);
  mu.total_mass = kahan_total(mu.weights);
  return mu;
}

double ball_mass(const DiscreteMeasure& mu, const Ball& ball) {
  if (int(ball.center.size()) != mu.ambient_dim) {
    fail("dimension", "ball center dimension mismatch");
  }
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius)) {
    fail("bad_radius", "ball radius must be positive");
  }
  double r2 = ball.radius * ball.radius;
  const int d = mu.ambient_dim;
  const double* c = ball.center.data();
  KahanSum mass;
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    if (sq_dist(mu.atom(i), c, d) <= r2) mass.add(mu.weights[i]);
  }
  return mass.value();
}

double bounding_diameter(const DiscreteMeasure& mu) {
  const int d = mu.ambient_dim;
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    const double* x = mu.atom(i);
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(s);
}

FrostmanEstimate frostman_exponent(const DiscreteMeasure& mu, const std::vector<double>& radii,
                                   const CenterPolicy& policy) {
  if (radii.size() < 3) fail("insufficient_scales", "need at least 3 radii");
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) fail("bad_radius", "radii must be positive");
    if (r < mu.resolution) fail("below_resolution", "radius probes below the measure resolution");
  }

  // Distinct sampled centers; the max over a multiset equals the max over the
  // underlying set, so duplicates are dropped for speed.
  std::vector<std::size_t> centers;
  if (policy.count >= mu.atom_count()) {
    centers.resize(mu.atom_count());
    for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = i;
  } else {
    centers = sample_indices(mu, policy.count, policy.seed);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  }

  // Radii sorted ascending by squared value; one pass per center bins every
  // atom into the smallest enclosing radius, suffix sums give ball masses.
  std::vector<double> r_sorted(radii);
  std::sort(r_sorted.begin(), r_sorted.end());
  std::vector<double> r2(r_sorted.size());
  for (std::size_t j = 0; j < r_sorted.size(); ++j) r2[j] = r_sorted[j] * r_sorted[j];

  std::vector<double> max_mass(r_sorted.size(), 0.0);
  const int d = mu.ambient_dim;
  std::vector<double> bucket(r_sorted.size());
  for (std::size_t ci : centers) {
    std::fill(bucket.begin(), bucket.end(), 0.0);
    const double* c = mu.atom(ci);
    for (std::size_t i = 0; i < mu.atom_count(); ++i) {
      double d2 = sq_dist(mu.atom(i), c, d);
      if (d2 <= r2.back()) {
        std::size_t j = std::size_t(std::lower_bound(r2.begin(), r2.end(), d2) - r2.begin());
        bucket[j] += mu.weights[i];
      }
    }
    double run = 0.0;
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      run += bucket[j];
      max_mass[j] = std::max(max_mass[j], run);
    }
  }

  std::vector<double> lx(r_sorted.size()), ly(r_sorted.size());
  for (std::size_t j = 0; j < r_sorted.size(); ++j) {
    lx[j] = std::log(r_sorted[j]);
    ly[j] = std::log(max_mass[j]);
  }
  LinearFit fit = fit_line(lx, ly);

  FrostmanEstimate est;
  est.exponent = std::clamp(fit.slope, 0.0, double(mu.ambient_dim));
  est.constant = std::exp(fit.intercept);
  est.radii_used = r_sorted;
  KahanSum ss;
  double worst = 0.0;
  for (std::size_t j = 0; j < r_sorted.size(); ++j) {
    double predicted = est.constant * std::pow(r_sorted[j], est.exponent);
    worst = std::max(worst, max_mass[j] / predicted - 1.0);
    double res = ly[j] - (fit.intercept + fit.slope * lx[j]);
    ss.add(res * res);
  }
  est.max_violation = std::max(0.0, worst);
  est.residual = std::sqrt(ss.value() / double(r_sorted.size()));
  return est;
}

DiscreteMeasure product_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                std::size_t cap) {
  std::size_t n1 = mu.atom_count(), n2 = nu.atom_count();
  if (n1 > cap / n2) fail("product_too_large", "product would exceed the atom cap");
  std::size_t n = n1 * n2;
  const int d1 = mu.ambient_dim, d2 = nu.ambient_dim, d = d1 + d2;

  DiscreteMeasure out;
  out.ambient_dim = d;
  out.points.resize(n * std::size_t(d));
  out.weights.resize(n);
  out.resolution = std::max(mu.resolution, nu.resolution);
  double* pts = out.points.data();
  for (std::size_t i = 0; i < n1; ++i) {
    const double* xi = mu.atom(i);
    double wi = mu.weights[i];
    for (std::size_t j = 0; j < n2; ++j) {
      const double* yj = nu.atom(j);
      double* row = pts + (i * n2 + j) * std::size_t(d);
      for (int k = 0; k < d1; ++k) row[k] = xi[k];
      for (int k = 0; k < d2; ++k) row[d1 + k] = yj[k];
      out.weights[i * n2 + j] = wi * nu.weights[j];
    }
  }
  out.total_mass = kahan_total(out.weights);

  // Flatten so nested products keep the finest factorization available.
  auto append_factors = [&out](const DiscreteMeasure& m) {
    if (m.factors.empty()) {
      DiscreteMeasure f = m;
      f.factors.clear();
      out.factors.push_back(std::move(f));
    } else {
      for (const auto& f : m.factors) out.factors.push_back(f);
    }
  };
  append_factors(mu);
  append_factors(nu);
  return out;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, int dim_out,
                            const std::function<void(const double*, double*)>& map,
                            double resolution_out) {
  if (dim_out < 1) fail("map_dimension", "output dimension must be >= 1");
  DiscreteMeasure out;
  out.ambient_dim = dim_out;
  out.points.resize(mu.atom_count() * std::size_t(dim_out));
  out.weights = mu.weights;
  out.total_mass = mu.total_mass;  // weights unchanged, so the sum is identical
  out.resolution = resolution_out >= 0.0 ? resolution_out : mu.resolution;
  double* dst = out.points.data();
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    map(mu.atom(i), dst + i * std::size_t(dim_out));
  }
  validate_measure(out);
  return out;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<std::vector<double>(const double*, int)>& map) {
  std::vector<double> first = map(mu.atom(0), mu.ambient_dim);
  int dim_out = int(first.size());
  if (dim_out < 1) fail("map_dimension", "map produced an empty point");
  DiscreteMeasure out;
  out.ambient_dim = dim_out;
  out.points.resize(mu.atom_count() * std::size_t(dim_out));
  out.weights = mu.weights;
  out.total_mass = mu.total_mass;
  out.resolution = mu.resolution;
  std::copy(first.begin(), first.end(), out.points.begin());
  for (std::size_t i = 1; i < mu.atom_count(); ++i) {
    std::vector<double> y = map(mu.atom(i), mu.ambient_dim);
    if (int(y.size()) != dim_out) fail("map_dimension", "map output dimension varies across atoms");
    std::copy(y.begin(), y.end(), out.points.begin() + i * std::size_t(dim_out));
  }
  validate_measure(out);
  return out;
}

double lower_derivative_density(const DiscreteMeasure& mu, const std::vector<double>& z,
                                const std::vector<double>& radii) {
  if (int(z.size()) != mu.ambient_dim) fail("dimension", "evaluation point dimension mismatch");
  if (radii.empty()) fail("insufficient_scales", "need at least one radius");
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0)) fail("bad_radius", "radii must be positive");
    if (radii[j] < mu.resolution) fail("below_resolution", "radius below measure resolution");
    if (j > 0 && !(radii[j] < radii[j - 1])) fail("bad_radius", "radii must be strictly decreasing");
  }
  double vol = ball_volume(mu.ambient_dim);
  double best = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    double m = ball_mass(mu, Ball{z, r});
    best = std::min(best, m / (vol * std::pow(r, mu.ambient_dim)));
  }
  return best;
}

DiscreteMeasure subsample(const DiscreteMeasure& mu, std::size_t m, std::uint64_t seed) {
  if (m == 0) fail("empty_measure", "subsample size must be >= 1");
  std::vector<std::size_t> idx = sample_indices(mu, m, seed);
  DiscreteMeasure out;
  out.ambient_dim = mu.ambient_dim;
  out.points.resize(m * std::size_t(mu.ambient_dim));
  out.weights.assign(m, mu.total_mass / double(m));
  out.total_mass = mu.total_mass;
  out.resolution = mu.resolution;
  for (std::size_t k = 0; k < m; ++k) {
    const double* x = mu.atom(idx[k]);
    std::copy(x, x + mu.ambient_dim, out.points.begin() + k * std::size_t(mu.ambient_dim));
  }
  out.total_mass = kahan_total(out.weights);
  return out;
}

}  // namespace fraclab
