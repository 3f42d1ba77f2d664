#include "fraclab/rotation.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab {

namespace {

constexpr double kOrthTol = 1e-12;

double max_orthogonality_defect(int n, const std::vector<double>& m) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += m[k * n + i] * m[k * n + j];
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

Rotation make_rotation(int dim, std::vector<double> entries) {
  if (dim < 1 || dim > 3) fail("unsupported_dimension", "O(n) supported for n in {1,2,3}");
  if (entries.size() != std::size_t(dim) * std::size_t(dim)) {
    fail("shape_mismatch", "rotation entries must be dim x dim");
  }
  if (max_orthogonality_defect(dim, entries) > kOrthTol) {
    fail("not_orthogonal", "matrix fails g^T g = I at 1e-12");
  }
  Rotation g;
  g.dim = dim;
  g.m = std::move(entries);
  return g;
}

void apply_rotation(const Rotation& g, const double* in, double* out) {
  int n = g.dim;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += g.m[std::size_t(i) * n + j] * in[j];
    out[i] = s;
  }
}

void apply_inverse(const Rotation& g, const double* in, double* out) {
  int n = g.dim;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += g.m[std::size_t(j) * n + i] * in[j];
    out[i] = s;
  }
}

double rotation_determinant(const Rotation& g) {
  const auto& m = g.m;
  switch (g.dim) {
    case 1: return m[0];
    case 2: return m[0] * m[3] - m[1] * m[2];
    default:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
}

double rotation_distance(const Rotation& a, const Rotation& b) {
  if (a.dim != b.dim) fail("dimension", "rotation dimensions differ");
  int n = a.dim;
  std::vector<double> d(std::size_t(n) * n);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.m[i] - b.m[i];
  // Largest eigenvalue of D^T D via power iteration; 3x3 at most, so a few
  // dozen iterations are exact to machine precision.
  std::vector<double> g(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += d[std::size_t(k) * n + i] * d[std::size_t(k) * n + j];
      g[std::size_t(i) * n + j] = s;
    }
  std::vector<double> v(n, 1.0), w(n);
  double lambda = 0.0;
  for (int iter = 0; iter < 64; ++iter) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += g[std::size_t(i) * n + j] * v[j];
      w[i] = s;
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += w[i] * w[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
    lambda = norm;
  }
  return std::sqrt(lambda);
}

Rotation haar_sample(int n, std::mt19937_64& rng) {
  if (n < 1 || n > 3) fail("unsupported_dimension", "O(n) supported for n in {1,2,3}");
  if (n == 1) {
    double s = (rng() & 1u) ? 1.0 : -1.0;
    Rotation g;
    g.dim = 1;
    g.m = {s};
    return g;
  }
  if (n == 2) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    double phi = uni(rng);
    double c = std::cos(phi), s = std::sin(phi);
    Rotation g;
    g.dim = 2;
    if (rng() & 1u) {
      g.m = {c, s, s, -c};  // reflection branch
    } else {
      g.m = {c, -s, s, c};
    }
    return g;
  }
  // n == 3: Gram-Schmidt on a Gaussian matrix. With the positive-normalization
  // convention the resulting Q is Haar-distributed over the full group (both
  // determinant signs appear with probability 1/2).
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double a[3][3];
    for (auto& row : a)
      for (double& x : row) x = gauss(rng);
    // Orthonormalize the columns, two passes for 1e-12-grade orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < j; ++k) {
          double dot = 0.0;
          for (int i = 0; i < 3; ++i) dot += a[i][k] * a[i][j];
          for (int i = 0; i < 3; ++i) a[i][j] -= dot * a[i][k];
        }
        double norm = 0.0;
        for (int i = 0; i < 3; ++i) norm += a[i][j] * a[i][j];
        norm = std::sqrt(norm);
        if (norm < 1e-8) goto resample;  // astronomically rare degenerate draw
        for (int i = 0; i < 3; ++i) a[i][j] /= norm;
      }
    }
    {
      Rotation g;
      g.dim = 3;
      g.m = {a[0][0], a[0][1], a[0][2], a[1][0], a[1][1], a[1][2], a[2][0], a[2][1], a[2][2]};
      if (max_orthogonality_defect(3, g.m) > kOrthTol) continue;
      return g;
    }
  resample:;
  }
}

RotationMeasure haar_rotation_measure(int n, std::size_t count, std::uint64_t seed) {
  if (count == 0) fail("empty_measure", "need at least one sample");
  RotationMeasure theta;
  theta.samples.reserve(count);
  theta.weights.assign(count, 1.0 / double(count));
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    theta.samples.push_back(haar_sample(n, rng));
  }
  theta.alpha = double(n) * double(n - 1) / 2.0;
  theta.beta = theta.alpha - double(n - 1) * double(n - 2) / 2.0;
  return theta;
}

RotationMeasure subgroup_rotation_measure(int n, std::size_t count, std::uint64_t seed) {
  if (n < 2 || n > 3) fail("unsupported_dimension", "subgroup embedding needs n in {2,3}");
  if (count == 0) fail("empty_measure", "need at least one sample");
  RotationMeasure theta;
  theta.samples.reserve(count);
  theta.weights.assign(count, 1.0 / double(count));
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    Rotation h = haar_sample(n - 1, rng);
    Rotation g;
    g.dim = n;
    g.m.assign(std::size_t(n) * n, 0.0);
    for (int r = 0; r < n - 1; ++r)
      for (int c = 0; c < n - 1; ++c) g.m[std::size_t(r) * n + c] = h.m[std::size_t(r) * (n - 1) + c];
    g.m[std::size_t(n - 1) * n + (n - 1)] = 1.0;
    theta.samples.push_back(std::move(g));
  }
  theta.alpha = double(n - 1) * double(n - 2) / 2.0;
  theta.beta = 0.0;  // alpha - (n-1)(n-2)/2
  return theta;
}

std::vector<double> apply_S(const Rotation& g, const std::vector<double>& x,
                            const std::vector<double>& y) {
  int n = g.dim;
  if (int(x.size()) != n || int(y.size()) != n) fail("dimension", "S_g needs x, y in R^n");
  std::vector<double> gy(n), out(n);
  apply_rotation(g, y.data(), gy.data());
  for (int i = 0; i < n; ++i) out[i] = x[i] - gy[i];
  return out;
}

std::vector<double> apply_pi(double t, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail("dimension", "pi_t needs x, y of equal dimension");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - t * y[i];
  return out;
}

DiscreteMeasure apply_S_measure(const Rotation& g, const DiscreteMeasure& mu) {
  int n = g.dim;
  if (mu.ambient_dim != 2 * n) fail("dimension", "S_g needs a measure on R^{2n}");
  return pushforward(mu, n, [&g, n](const double* in, double* out) {
    double gy[3];
    apply_rotation(g, in + n, gy);
    for (int i = 0; i < n; ++i) out[i] = in[i] - gy[i];
  });
}

DiscreteMeasure apply_pi_measure(double t, const DiscreteMeasure& mu) {
  if (mu.ambient_dim % 2 != 0) fail("dimension", "pi_t needs a measure on R^{2n}");
  int n = mu.ambient_dim / 2;
  return pushforward(mu, n, [t, n](const double* in, double* out) {
    for (int i = 0; i < n; ++i) out[i] = in[i] - t * in[n + i];
  });
}

PlaneBasis plane_basis(const Rotation& g) {
  int n = g.dim;
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  PlaneBasis basis;
  basis.g = g;
  basis.vectors_u.resize(n, std::vector<double>(2 * n, 0.0));
  basis.vectors_kernel.resize(n, std::vector<double>(2 * n, 0.0));
  std::vector<double> e(n, 0.0), img(n);
  for (int i = 0; i < n; ++i) {
    std::fill(e.begin(), e.end(), 0.0);
    e[i] = 1.0;
    apply_inverse(g, e.data(), img.data());
    for (int k = 0; k < n; ++k) {
      basis.vectors_u[i][k] = (k == i ? inv_sqrt2 : 0.0);
      basis.vectors_u[i][n + k] = -img[k] * inv_sqrt2;
    }
    apply_rotation(g, e.data(), img.data());
    for (int k = 0; k < n; ++k) {
      basis.vectors_kernel[i][k] = img[k] * inv_sqrt2;
      basis.vectors_kernel[i][n + k] = (k == i ? inv_sqrt2 : 0.0);
    }
  }
  return basis;
}

std::vector<ConcentrationRow> concentration_audit(const RotationMeasure& theta,
                                                  const std::vector<double>& x,
                                                  const std::vector<double>& z,
                                                  const std::vector<double>& radii) {
  if (theta.samples.empty()) fail("empty_measure", "theta has no samples");
  int n = theta.samples.front().dim;
  if (int(x.size()) != n || int(z.size()) != n) fail("dimension", "x, z must live in R^n");
  double nx = 0.0, nz = 0.0;
  for (double v : x) nx += v * v;
  for (double v : z) nz += v * v;
  nx = std::sqrt(nx);
  nz = std::sqrt(nz);
  if (nx == 0.0 || nz == 0.0) fail("degenerate_input", "x and z must be nonzero");

  KahanSum wsum, wsq;
  for (double w : theta.weights) {
    wsum.add(w);
    wsq.add(w * w);
  }
  double W = wsum.value();

  // Precompute |x - g z| once per group element.
  std::vector<double> dist(theta.samples.size());
  std::vector<double> gz(n);
  for (std::size_t i = 0; i < theta.samples.size(); ++i) {
    apply_rotation(theta.samples[i], z.data(), gz.data());
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double t = x[k] - gz[k];
      s += t * t;
    }
    dist[i] = std::sqrt(s);
  }

  std::vector<ConcentrationRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    if (!(r > 0.0)) fail("bad_radius", "radii must be positive");
    KahanSum hit;
    for (std::size_t i = 0; i < theta.samples.size(); ++i) {
      if (dist[i] < r) hit.add(theta.weights[i]);
    }
    ConcentrationRow row;
    row.radius = r;
    row.measured = hit.value() / W;
    double ratio = std::min(r / nx, r / nz);
    row.bound = theta.beta == 0.0 ? 1.0 : std::pow(std::min(ratio, 1.0), theta.beta);
    double p = row.measured;
    row.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) * wsq.value()) / W;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fraclab
