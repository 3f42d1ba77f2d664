#include "fraclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fraclab/dimension.hpp"

namespace fraclab {

namespace {

std::complex<double> fourier_leaf(const DiscreteMeasure& mu, const double* xi) {
  const int d = mu.ambient_dim;
  KahanSum re, im;
  const double* p = mu.points.data();
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    double phase = 0.0;
    for (int k = 0; k < d; ++k) phase += xi[k] * p[i * std::size_t(d) + k];
    phase *= -2.0 * kPi;
    double w = mu.weights[i];
    re.add(w * std::cos(phase));
    im.add(w * std::sin(phase));
  }
  return {re.value(), im.value()};
}

// Unit direction sampling.
void sphere_direction(int d, std::mt19937_64& rng, double* v) {
  if (d == 1) {
    v[0] = (rng() & 1u) ? 1.0 : -1.0;
    return;
  }
  if (d == 2) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    double phi = uni(rng);
    v[0] = std::cos(phi);
    v[1] = std::sin(phi);
    return;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      v[k] = gauss(rng);
      n2 += v[k] * v[k];
    }
    if (n2 > 1e-24) {
      double inv = 1.0 / std::sqrt(n2);
      for (int k = 0; k < d; ++k) v[k] *= inv;
      return;
    }
  }
}

// Deterministic node families on S^{d-1}.
std::vector<double> sphere_nodes(int d, std::size_t m) {
  std::vector<double> nodes(m * std::size_t(d));
  if (d == 1) {
    // m is forced to 2 by callers
    nodes[0] = 1.0;
    nodes[1] = -1.0;
    return nodes;
  }
  if (d == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      double phi = 2.0 * kPi * (double(k) + 0.5) / double(m);
      nodes[2 * k] = std::cos(phi);
      nodes[2 * k + 1] = std::sin(phi);
    }
    return nodes;
  }
  // Fibonacci spiral on S^2.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (std::size_t k = 0; k < m; ++k) {
    double z = 1.0 - (2.0 * double(k) + 1.0) / double(m);
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = 2.0 * kPi * double(k) / golden;
    nodes[3 * k] = rad * std::cos(phi);
    nodes[3 * k + 1] = rad * std::sin(phi);
    nodes[3 * k + 2] = z;
  }
  return nodes;
}

std::size_t node_rule(int d, double r, double diam, const SphereQuadrature& q) {
  if (d == 1) return 2;
  if (d == 2) {
    std::size_t base = q.min_nodes > 0 ? q.min_nodes : 64;
    std::size_t bw = std::size_t(std::ceil(7.0 * r * diam + 32.0));
    return std::max(base, bw);
  }
  std::size_t base = q.min_nodes > 0 ? q.min_nodes : 512;
  double l = 3.2 * r * diam + 12.0;
  std::size_t bw = std::size_t(std::ceil(l * l));
  return std::min(q.max_nodes, std::max(base, bw));
}

struct RunningMoments {
  KahanSum sum, sumsq;
  std::size_t n = 0;
  void add(double x) {
    sum.add(x);
    sumsq.add(x * x);
    ++n;
  }
  double mean() const { return sum.value() / double(n); }
  double std_error() const {
    if (n < 2) return std::numeric_limits<double>::infinity();
    double m = mean();
    double var = std::max(0.0, sumsq.value() / double(n) - m * m);
    return std::sqrt(var / double(n - 1));
  }
};

}  // namespace

std::complex<double> fourier_at(const DiscreteMeasure& mu, const double* xi) {
  if (mu.factors.empty()) return fourier_leaf(mu, xi);
  std::complex<double> prod(1.0, 0.0);
  const double* p = xi;
  for (const auto& f : mu.factors) {
    prod *= fourier_at(f, p);
    p += f.ambient_dim;
  }
  return prod;
}

std::complex<double> fourier_at(const DiscreteMeasure& mu, const std::vector<double>& xi) {
  if (int(xi.size()) != mu.ambient_dim) fail("dimension", "frequency dimension mismatch");
  return fourier_at(mu, xi.data());
}

std::size_t spherical_node_count(const DiscreteMeasure& mu, double r, const SphereQuadrature& q) {
  return node_rule(mu.ambient_dim, r, bounding_diameter(mu), q);
}

double spherical_average(const DiscreteMeasure& mu, double r, const SphereQuadrature& q) {
  const int d = mu.ambient_dim;
  if (d < 1 || d > 3) fail("unsupported_dimension", "spherical averages support d in {1,2,3}");
  if (!(r > 1.0)) fail("below_valid_range", "spherical average defined for r > 1");
  std::size_t m = node_rule(d, r, bounding_diameter(mu), q);
  std::vector<double> nodes = sphere_nodes(d, m);
  KahanSum acc;
  std::vector<double> xi(d);
  for (std::size_t k = 0; k < m; ++k) {
    for (int c = 0; c < d; ++c) xi[c] = r * nodes[k * std::size_t(d) + c];
    acc.add(std::norm(fourier_at(mu, xi.data())));
  }
  return sphere_area(d) * acc.value() / double(m);
}

MonteCarloValue shell_l2(const DiscreteMeasure& mu, double a, double b, const McOptions& opt) {
  if (!(b > a) || a < 0.0) fail("bad_radius", "shell needs 0 <= a < b");
  const int d = mu.ambient_dim;
  double vol = ball_volume(d) * (std::pow(b, d) - std::pow(a, d));
  RunningMoments mom;
  std::vector<double> xi(d);
  std::size_t target = opt.initial;
  double ad = std::pow(a, d), bd = std::pow(b, d);
  while (true) {
    for (std::size_t k = mom.n; k < target; ++k) {
      std::mt19937_64 rng(derive_seed(opt.seed, k));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      double rho = std::pow(ad + uni(rng) * (bd - ad), 1.0 / double(d));
      sphere_direction(d, rng, xi.data());
      for (int c = 0; c < d; ++c) xi[c] *= rho;
      mom.add(std::norm(fourier_at(mu, xi.data())));
    }
    double se = mom.std_error() * vol;
    double val = mom.mean() * vol;
    if (se <= opt.target_rel_error * std::abs(val) || target >= opt.cap) {
      return {val, se, mom.n};
    }
    target = std::min(opt.cap, target * 2);
  }
}

MonteCarloValue annulus_average(const DiscreteMeasure& mu, double r, double width,
                                const McOptions& opt) {
  if (!(width > 0.0)) fail("bad_radius", "width must be positive");
  if (!(r > 1.0 + width)) fail("below_valid_range", "annulus average defined for r > 1 + width");
  MonteCarloValue v = shell_l2(mu, r - width, r + width, opt);
  double scale = std::pow(r, 1 - mu.ambient_dim);
  return {v.value * scale, v.std_error * scale, v.samples};
}

MonteCarloValue cumulative_spectrum(const DiscreteMeasure& mu, double R, const McOptions& opt) {
  if (!(R > 0.0)) fail("bad_radius", "R must be positive");
  MonteCarloValue total{0.0, 0.0, 0};
  double var = 0.0;
  double b = R;
  std::uint64_t shell_idx = 0;
  while (true) {
    double a = b > 1.0 ? b / 2.0 : 0.0;
    McOptions o = opt;
    o.seed = derive_seed(opt.seed, 0xc0de + shell_idx);
    MonteCarloValue v = shell_l2(mu, a, b, o);
    total.value += v.value;
    var += v.std_error * v.std_error;
    total.samples += v.samples;
    if (a == 0.0) break;
    b = a;
    ++shell_idx;
  }
  total.std_error = std::sqrt(var);
  return total;
}

double sigma_theta(const DiscreteMeasure& nu, const RotationMeasure& theta,
                   const std::vector<double>& xi) {
  if (theta.samples.empty()) fail("empty_measure", "theta has no samples");
  int n = theta.samples.front().dim;
  if (int(xi.size()) != n || nu.ambient_dim != n) fail("dimension", "sigma_theta needs nu, xi in R^n");
  double norm2 = 0.0;
  for (double c : xi) norm2 += c * c;
  if (!(norm2 > 1.0)) fail("below_valid_range", "sigma_theta defined for |xi| > 1");
  std::vector<double> eta(n);
  KahanSum acc;
  for (std::size_t i = 0; i < theta.samples.size(); ++i) {
    apply_inverse(theta.samples[i], xi.data(), eta.data());
    acc.add(theta.weights[i] * std::norm(fourier_at(nu, eta.data())));
  }
  return acc.value();
}

double riesz_constant(int d, double s) {
  return std::pow(kPi, s - double(d) / 2.0) * std::tgamma((double(d) - s) / 2.0) /
         std::tgamma(s / 2.0);
}

namespace {

// I0(x) e^{-x}, overflow-free.
double scaled_bessel_i0(double x) {
  if (x < 30.0) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
  const double ix = 1.0 / x;
  return (1.0 + ix * (0.125 + ix * (9.0 / 128.0 + ix * 225.0 / 3072.0))) /
         std::sqrt(2.0 * kPi * x);
}

// Radial density of |u e1 + G| with G standard d-dim normal.
double noncentral_radial_pdf(int d, double rho, double u) {
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * kPi);
  auto phi = [&](double x) { return inv_sqrt2pi * std::exp(-0.5 * x * x); };
  if (u < 1e-8) {
    // central chi
    if (d == 1) return 2.0 * phi(rho);
    if (d == 2) return rho * std::exp(-0.5 * rho * rho);
    return rho * rho * std::exp(-0.5 * rho * rho) * std::sqrt(2.0 / kPi);
  }
  if (d == 1) return phi(rho - u) + phi(rho + u);
  if (d == 2) return rho * std::exp(-0.5 * (rho - u) * (rho - u)) * scaled_bessel_i0(rho * u);
  const double x = rho * u;
  if (x < 30.0) {
    return (rho / u) * 2.0 * std::sinh(x) * std::exp(-0.5 * (rho * rho + u * u)) * inv_sqrt2pi;
  }
  return (rho / u) * phi(rho - u);
}

// E |u e1 + G|^{-s}: analytic rho^{d-1} head below rho0 plus a log-space
// trapezoid; feeds the kernel table below.
double noncentral_inverse_moment(int d, double s, double u) {
  const double rho0 = 0.05;
  const double q0 = (d == 2) ? std::exp(-0.5 * u * u)
                             : 2.0 * std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi);
  double value = q0 * std::pow(rho0, double(d) - s) / (double(d) - s);
  const double t0 = std::log(rho0);
  const double t1 = std::log(u + 14.0);
  const std::size_t m = 1024;
  const double h = (t1 - t0) / double(m);
  KahanSum acc;
  for (std::size_t i = 0; i <= m; ++i) {
    const double t = t0 + h * double(i);
    const double rho = std::exp(t);
    const double g = std::exp((1.0 - s) * t) * noncentral_radial_pdf(d, rho, u);
    acc.add((i == 0 || i == m) ? 0.5 * g : g);
  }
  return value + h * acc.value();
}

// Riesz kernel of a Gaussian-mollified pair difference: K(r) = E |x - y +
// tau G|^{-s} = tau^{-s} F(r/tau). F is tabulated once on a log grid; beyond
// the table the two-term large-r expansion is exact to O(u^{-4}).
class MollifiedRieszKernel {
 public:
  MollifiedRieszKernel(int d, double s, double tau) : d_(d), s_(s), tau_(tau) {
    f0_ = std::exp2(-0.5 * s) * std::tgamma((double(d) - s) / 2.0) /
          std::tgamma(double(d) / 2.0);
    lu_min_ = std::log(1e-2);
    lu_max_ = std::log(u_max_);
    step_ = (lu_max_ - lu_min_) / double(table_size_ - 1);
    lf_.resize(table_size_);
    for (std::size_t j = 0; j < table_size_; ++j) {
      const double u = std::exp(lu_min_ + step_ * double(j));
      lf_[j] = std::log(noncentral_inverse_moment(d, s, u));
    }
  }

  double at_zero() const { return std::pow(tau_, -s_) * f0_; }

  double operator()(double r) const {
    const double u = r / tau_;
    if (u >= u_max_) {
      const double corr = s_ * (s_ + 2.0 - double(d_)) * tau_ * tau_ / (2.0 * r * r);
      return std::pow(r, -s_) * (1.0 + corr);
    }
    if (u <= 1e-2) return std::pow(tau_, -s_) * f0_;  // flat to O(u^2)
    const double x = (std::log(u) - lu_min_) / step_;
    const std::size_t j = std::min(std::size_t(x), table_size_ - 2);
    const double frac = x - double(j);
    return std::pow(tau_, -s_) * std::exp(lf_[j] + frac * (lf_[j + 1] - lf_[j]));
  }

 private:
  static constexpr double u_max_ = 32.0;
  static constexpr std::size_t table_size_ = 161;
  int d_;
  double s_, tau_;
  double f0_ = 0.0;
  double lu_min_ = 0.0, lu_max_ = 0.0, step_ = 0.0;
  std::vector<double> lf_;
};

}  // namespace

EnergyReport riesz_energy_fourier(const DiscreteMeasure& mu, double s, const FreqQuadrature& q) {
  const int d = mu.ambient_dim;
  if (d < 1 || d > 3) fail("unsupported_dimension", "frequency energies support d in {1,2,3}");
  if (!(s > 0.0) || s >= double(d)) fail("bad_exponent", "s must lie in (0, ambient_dim)");

  EnergyReport rep;
  rep.s = s;
  rep.constant_used = riesz_constant(d, s);

  double sigma = q.mollify ? mu.resolution : 0.0;
  rep.mollification_width = sigma;

  // Spatial side of the comparison. Both routes must price the same object,
  // so with mollification on this is the exact pair sum of the smoothed copy:
  // E |x_i - x_j + sqrt(2) sigma G|^{-s}, diagonal included (it is finite).
  // The frequency route below weights |mu^|^2 by the matching |phi^|^2.
  if (sigma > 0.0) {
    MollifiedRieszKernel kernel(d, s, std::sqrt(2.0) * sigma);
    KahanSum acc;
    std::size_t clamped = 0;
    const std::size_t n_atoms = mu.atom_count();
    for (std::size_t i = 0; i < n_atoms; ++i) {
      const double* xi_p = mu.atom(i);
      const double wi = mu.weights[i];
      acc.add(wi * wi * kernel.at_zero());
      for (std::size_t j = i + 1; j < n_atoms; ++j) {
        const double* xj_p = mu.atom(j);
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double t = xi_p[k] - xj_p[k];
          r2 += t * t;
        }
        const double r = std::sqrt(r2);
        if (r < mu.resolution) ++clamped;
        acc.add(2.0 * wi * mu.weights[j] * kernel(r));
      }
    }
    rep.spatial_value = acc.value();
    rep.clamped_pairs = clamped;  // pairs inside the smoothing width, informational
  } else {
    SpatialEnergy spatial = riesz_energy_spatial(mu, s);
    rep.spatial_value = spatial.value;
    rep.clamped_pairs = spatial.clamped_pairs;
  }
  double xi_max = q.xi_max > 0.0 ? q.xi_max : (mu.resolution > 0.0 ? 1.0 / mu.resolution : 256.0);
  double xi_min = q.xi_min;
  if (!(xi_min > 0.0) || !(xi_max > xi_min)) fail("bad_radius", "need 0 < xi_min < xi_max");

  const double area = sphere_area(d);
  const double c = rep.constant_used;
  const double mass2 = mu.total_mass * mu.total_mass;

  // Exact integral of the low-frequency model c*A*rho^{s-1}*(mass^2 - (2 pi
  // rho)^2 * mass^2 * tr(cov)/d) over [0, xi_min]; the quadratic term is the
  // leading Taylor correction of the angular average of |mu^|^2.
  double trace_cov = 0.0;
  {
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < mu.atom_count(); ++i)
      for (int k = 0; k < d; ++k) mean[k] += mu.weights[i] * mu.atom(i)[k];
    for (int k = 0; k < d; ++k) mean[k] /= mu.total_mass;
    for (std::size_t i = 0; i < mu.atom_count(); ++i)
      for (int k = 0; k < d; ++k) {
        double t = mu.atom(i)[k] - mean[k];
        trace_cov += mu.weights[i] * t * t;
      }
    trace_cov /= mu.total_mass;
  }
  double plug = c * area * mass2 *
                (std::pow(xi_min, s) / s -
                 4.0 * kPi * kPi * trace_cov / double(d) * std::pow(xi_min, s + 2.0) / (s + 2.0));

  // Radial log grid; per node the angular mean of |mu^|^2 at the bandwidth-
  // driven node count, then trapezoid in log rho of c*A*mean*moll*rho^s.
  std::size_t n_radial =
      std::size_t(std::ceil(double(q.radial_per_decade) * std::log10(xi_max / xi_min))) + 1;
  n_radial = std::max<std::size_t>(n_radial, 8);
  double lmin = std::log(xi_min), lmax = std::log(xi_max);
  double diam = bounding_diameter(mu);

  std::vector<double> integrand(n_radial), raw_mean(n_radial), rho_grid(n_radial);
  std::size_t nodes_total = 0;
  std::vector<double> xi(d);
  for (std::size_t i = 0; i < n_radial; ++i) {
    double lr = lmin + (lmax - lmin) * double(i) / double(n_radial - 1);
    double rho = std::exp(lr);
    rho_grid[i] = rho;
    std::size_t m = node_rule(d, rho, diam, SphereQuadrature{});
    nodes_total += m;
    std::vector<double> dirs = sphere_nodes(d, m);
    KahanSum acc;
    for (std::size_t k = 0; k < m; ++k) {
      for (int cc = 0; cc < d; ++cc) xi[cc] = rho * dirs[k * std::size_t(d) + cc];
      acc.add(std::norm(fourier_at(mu, xi.data())));
    }
    double mean = acc.value() / double(m);
    double moll = sigma > 0.0 ? std::exp(-4.0 * kPi * kPi * sigma * sigma * rho * rho) : 1.0;
    raw_mean[i] = mean * moll;
    integrand[i] = c * area * mean * moll * std::pow(rho, s);  // includes the d(log rho) Jacobian
  }
  rep.quadrature_nodes = nodes_total;

  double h = (lmax - lmin) / double(n_radial - 1);
  KahanSum quad;
  for (std::size_t i = 0; i + 1 < n_radial; ++i) quad.add(0.5 * h * (integrand[i] + integrand[i + 1]));

  // Tail beyond xi_max from the fitted decay of the last decade.
  double tail = 0.0;
  {
    std::size_t tail_pts = std::min<std::size_t>(n_radial, std::size_t(q.radial_per_decade) + 1);
    std::vector<double> lx, ly;
    for (std::size_t i = n_radial - tail_pts; i < n_radial; ++i) {
      if (raw_mean[i] > 0.0) {
        lx.push_back(std::log(rho_grid[i]));
        ly.push_back(std::log(raw_mean[i]));
      }
    }
    if (lx.size() >= 3) {
      LinearFit lf = fit_line(lx, ly);
      double expo = lf.slope + s;  // integrand ~ rho^{slope + s - 1}
      if (expo < -1e-9) {
        double level = raw_mean[n_radial - 1];
        tail = c * area * level * std::pow(xi_max, s) / (-expo);
      } else {
        tail = std::numeric_limits<double>::infinity();
      }
    } else if (raw_mean[n_radial - 1] > 0.0) {
      tail = std::numeric_limits<double>::infinity();
    }
  }

  rep.fourier_value = plug + quad.value();
  double denom = rep.fourier_value + (std::isfinite(tail) ? tail : 0.0);
  rep.plug_fraction = plug / denom;
  rep.tail_fraction = std::isfinite(tail) ? tail / denom : 1.0;
  rep.truncation_dominated = rep.tail_fraction > 0.2;
  rep.relative_gap = std::abs(rep.fourier_value - rep.spatial_value) /
                     std::max(rep.spatial_value, std::numeric_limits<double>::min());
  return rep;
}

MonteCarloValue directional_decay(const DiscreteMeasure& mu, const RotationMeasure& theta,
                                  double R, const McOptions& opt) {
  if (theta.samples.empty()) fail("empty_measure", "theta has no samples");
  int n = theta.samples.front().dim;
  if (mu.ambient_dim != 2 * n) fail("dimension", "measure must live on R^{2n}");
  if (!(R > 1.0)) fail("below_valid_range", "directional decay defined for R > 1");

  std::vector<double> cdf(theta.weights.size());
  KahanSum acc;
  for (std::size_t i = 0; i < theta.weights.size(); ++i) {
    acc.add(theta.weights[i]);
    cdf[i] = acc.value();
  }
  double wtot = cdf.back();

  double rn = std::pow(R, n), rn2 = std::pow(2.0 * R, n);
  double vol = ball_volume(n) * (rn2 - rn);

  RunningMoments mom;
  std::vector<double> xi(2 * n), v(n), eta(n);
  std::size_t target = opt.initial;
  while (true) {
    for (std::size_t k = mom.n; k < target; ++k) {
      std::mt19937_64 rng(derive_seed(opt.seed, k));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      const Rotation& g = theta.samples[std::min(
          theta.samples.size() - 1,
          std::size_t(std::lower_bound(cdf.begin(), cdf.end(), uni(rng) * wtot) - cdf.begin()))];
      double rho = std::pow(rn + uni(rng) * (rn2 - rn), 1.0 / double(n));
      sphere_direction(n, rng, v.data());
      for (int c = 0; c < n; ++c) v[c] *= rho;
      apply_inverse(g, v.data(), eta.data());
      for (int c = 0; c < n; ++c) {
        xi[c] = v[c];
        xi[n + c] = -eta[c];
      }
      mom.add(std::norm(fourier_at(mu, xi.data())));
    }
    double val = mom.mean() * vol * wtot;
    double se = mom.std_error() * vol * wtot;
    if (se <= opt.target_rel_error * std::abs(val) || target >= opt.cap) {
      return {val, se, mom.n};
    }
    target = std::min(opt.cap, target * 2);
  }
}

namespace {

// Returns the factor index splitting the coordinates at n, or 0 if none.
std::size_t factor_split_at(const DiscreteMeasure& mu, int n) {
  int acc = 0;
  for (std::size_t i = 0; i < mu.factors.size(); ++i) {
    acc += mu.factors[i].ambient_dim;
    if (acc == n) return i + 1;
    if (acc > n) return 0;
  }
  return 0;
}

std::complex<double> fourier_factor_range(const DiscreteMeasure& mu, std::size_t lo, std::size_t hi,
                                          const double* xi) {
  std::complex<double> prod(1.0, 0.0);
  const double* p = xi;
  for (std::size_t i = lo; i < hi; ++i) {
    prod *= fourier_at(mu.factors[i], p);
    p += mu.factors[i].ambient_dim;
  }
  return prod;
}

}  // namespace

double cone_average(const DiscreteMeasure& mu, double R, const ConeQuadrature& q) {
  if (mu.ambient_dim % 2 != 0) fail("dimension", "cone average needs a measure on R^{2n}");
  int n = mu.ambient_dim / 2;
  if (n < 2 || n > 3) fail("unsupported_dimension", "cone average supports n in {2,3}");
  if (!(R > 1.0)) fail("below_valid_range", "cone average defined for R > 1");

  double area = sphere_area(n);
  double diam = bounding_diameter(mu);
  std::size_t split = factor_split_at(mu, n);

  KahanSum outer;
  std::size_t m_t = std::max<std::size_t>(q.t_nodes, 4);
  std::vector<double> xi(2 * n);
  for (std::size_t it = 0; it < m_t; ++it) {
    double t = 1.0 + (double(it) + 0.5) / double(m_t);
    double rt = R * t;
    std::size_t m = node_rule(n, rt, diam, q.sphere);
    std::vector<double> dirs = sphere_nodes(n, m);
    double pair_mean;
    if (split > 0) {
      // separable: mean over u of |F_x|^2 times mean over v of |F_y|^2
      KahanSum mx, my;
      for (std::size_t k = 0; k < m; ++k) {
        for (int c = 0; c < n; ++c) xi[c] = rt * dirs[k * std::size_t(n) + c];
        mx.add(std::norm(fourier_factor_range(mu, 0, split, xi.data())));
        my.add(std::norm(fourier_factor_range(mu, split, mu.factors.size(), xi.data())));
      }
      pair_mean = (mx.value() / double(m)) * (my.value() / double(m));
    } else {
      KahanSum acc;
      for (std::size_t ku = 0; ku < m; ++ku) {
        for (int c = 0; c < n; ++c) xi[c] = rt * dirs[ku * std::size_t(n) + c];
        for (std::size_t kv = 0; kv < m; ++kv) {
          for (int c = 0; c < n; ++c) xi[n + c] = rt * dirs[kv * std::size_t(n) + c];
          acc.add(std::norm(fourier_at(mu, xi.data())));
        }
      }
      pair_mean = acc.value() / double(m) / double(m);
    }
    outer.add((1.0 / double(m_t)) * std::pow(t, n - 1) * area * pair_mean);
  }
  return outer.value();
}

}  // namespace fraclab
