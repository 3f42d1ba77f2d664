#include "fraclab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraclab {

namespace {

// Fixed stream for the three nonzero grid offsets; results must not depend on
// run-to-run state.
constexpr std::uint64_t kOffsetSeed = 0x0ff5e70ff5e7ULL;

double to_unit(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

std::vector<std::vector<double>> grid_offsets(int dim) {
  std::vector<std::vector<double>> offs(4, std::vector<double>(dim, 0.0));
  std::uint64_t state = kOffsetSeed;
  for (int o = 1; o < 4; ++o) {
    for (int k = 0; k < dim; ++k) {
      state = splitmix64(state);
      offs[o][k] = to_unit(state);
    }
  }
  return offs;
}

std::int64_t cell_index(double x, double scale, double offset) {
  return std::int64_t(std::floor(x / scale - offset));
}

}  // namespace

std::size_t box_count(const std::vector<double>& points, int dim, double scale,
                      const double* offset) {
  if (dim < 1 || dim > 4) fail("unsupported_dimension", "box counting supports d in {1,..,4}");
  if (!(scale > 0.0) || !std::isfinite(scale)) fail("bad_scales", "scale must be positive");
  std::size_t n = points.size() / std::size_t(dim);
  if (n == 0) fail("empty_set", "no points to count");

  static const double zeros[4] = {0, 0, 0, 0};
  const double* off = offset ? offset : zeros;

  // Exact per-dimension packing; overflow raises instead of hashing so counts
  // are collision-free by construction.
  std::vector<std::uint64_t> keys(n);
  const double* p = points.data();
  auto checked = [](std::int64_t c, std::int64_t bound) {
    if (c < -bound || c >= bound) fail("scale_overflow", "cell index exceeds packing range");
    return std::uint64_t(c + bound);
  };
  switch (dim) {
    case 1:
      for (std::size_t i = 0; i < n; ++i) keys[i] = std::uint64_t(cell_index(p[i], scale, off[0]));
      break;
    case 2:
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t a = checked(cell_index(p[2 * i], scale, off[0]), std::int64_t(1) << 31);
        std::uint64_t b = checked(cell_index(p[2 * i + 1], scale, off[1]), std::int64_t(1) << 31);
        keys[i] = (a << 32) | b;
      }
      break;
    case 3:
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t a = checked(cell_index(p[3 * i], scale, off[0]), std::int64_t(1) << 20);
        std::uint64_t b = checked(cell_index(p[3 * i + 1], scale, off[1]), std::int64_t(1) << 20);
        std::uint64_t c = checked(cell_index(p[3 * i + 2], scale, off[2]), std::int64_t(1) << 20);
        keys[i] = (a << 42) | (b << 21) | c;
      }
      break;
    default:
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t k = 0;
        for (int d = 0; d < 4; ++d) {
          k = (k << 16) | checked(cell_index(p[4 * i + d], scale, off[d]), std::int64_t(1) << 15);
        }
        keys[i] = k;
      }
  }
  std::sort(keys.begin(), keys.end());
  std::size_t occupied = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (keys[i] != keys[i - 1]) ++occupied;
  }
  return occupied;
}

ScalingFit box_dimension(const std::vector<double>& points, int dim,
                         const std::vector<double>& scales, double resolution_floor) {
  if (points.empty()) fail("empty_set", "no points");
  if (scales.size() < 4) fail("insufficient_scales", "need at least 4 scales");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0)) fail("bad_scales", "scales must be positive");
    if (j > 0 && !(scales[j] < scales[j - 1])) fail("bad_scales", "scales must strictly decrease");
    if (scales[j] < resolution_floor) fail("below_resolution", "scale below the resolution floor");
  }
  std::size_t n_points = points.size() / std::size_t(dim);

  ScalingFit fit;
  fit.counts.reserve(scales.size());
  for (double s : scales) fit.counts.push_back({s, box_count(points, dim, s)});

  // Keep scales that neither saturate at the atom count nor plateau at a
  // handful of cells; both regimes carry no slope information.
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    std::size_t occ = fit.counts[j].occupied;
    if (occ < 8) continue;
    if (double(occ) >= 0.9 * double(n_points)) continue;
    kept.push_back(j);
  }
  if (kept.size() < 4) fail("insufficient_scales", "fewer than 4 informative scales after trimming");

  auto offs = grid_offsets(dim);
  std::vector<double> lx(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) lx[i] = -std::log(scales[kept[i]]);

  std::vector<double> ly0;
  for (int o = 0; o < 4; ++o) {
    std::vector<double> ly(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      std::size_t occ = o == 0 ? fit.counts[kept[i]].occupied
                               : box_count(points, dim, scales[kept[i]], offs[o].data());
      ly[i] = std::log(double(occ));
    }
    LinearFit lf = fit_line(lx, ly);
    fit.offset_slopes.push_back(lf.slope);
    if (o == 0) {
      ly0 = ly;
      fit.intercept = lf.intercept;
      fit.r_squared = lf.r_squared;
    }
  }
  // The anchored grid is the estimator: every construction here lives on a
  // grid through the origin, and shifted grids split aligned cells with a
  // per-scale probability that itself drifts across rungs, which tilts the
  // fit low at shallow depth.  The shifted-grid slopes stay as a stability
  // diagnostic only.
  double lo = fit.offset_slopes[0], hi = fit.offset_slopes[0];
  for (double s : fit.offset_slopes) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  fit.slope = fit.offset_slopes[0];
  fit.offset_spread = hi - lo;
  fit.log_scales = lx;
  fit.log_values = ly0;
  fit.scale_window = {scales[kept.back()], scales[kept.front()]};
  return fit;
}

ScalingFit box_dimension(const DiscreteMeasure& mu, const std::vector<double>& scales) {
  return box_dimension(mu.points, mu.ambient_dim, scales, mu.resolution);
}

PositivityVerdict lebesgue_positivity(const std::vector<double>& points, int dim,
                                      double resolution_floor) {
  if (points.empty()) fail("empty_set", "no points");
  if (!(resolution_floor > 0.0)) fail("bad_resolution", "needs a positive resolution floor");
  std::size_t n = points.size() / std::size_t(dim);
  double lo[4], hi[4];
  for (int k = 0; k < dim; ++k) {
    lo[k] = std::numeric_limits<double>::infinity();
    hi[k] = -std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], points[i * dim + k]);
      hi[k] = std::max(hi[k], points[i * dim + k]);
    }
  double diam2 = 0.0;
  for (int k = 0; k < dim; ++k) diam2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  double diam = std::sqrt(diam2);
  if (!(diam / 8.0 > resolution_floor)) {
    fail("insufficient_scales", "support too small relative to the resolution floor");
  }

  std::vector<double> scales;
  double s = diam / 8.0;
  const double step = std::exp2(-0.5);
  while (s >= resolution_floor && scales.size() < 14) {
    scales.push_back(s);
    s *= step;
  }
  if (scales.size() < 4) fail("insufficient_scales", "fewer than 4 scales above the floor");

  PositivityVerdict out;
  out.fit.counts.reserve(scales.size());
  for (double sc : scales) out.fit.counts.push_back({sc, box_count(points, dim, sc)});

  // The covered volume converges from above as boundary cells empty out; the
  // limit behavior lives at the fine end, so fit the finest scales only.
  std::size_t fit_count = std::min<std::size_t>(6, scales.size());
  std::size_t first = scales.size() - fit_count;
  std::vector<double> lx(fit_count), ly(fit_count);
  for (std::size_t i = 0; i < fit_count; ++i) {
    double sc = scales[first + i];
    double covered = double(out.fit.counts[first + i].occupied) * std::pow(sc, dim);
    lx[i] = -std::log(sc);
    ly[i] = std::log(covered);
  }
  LinearFit lf = fit_line(lx, ly);
  out.fit.log_scales = lx;
  out.fit.log_values = ly;
  out.fit.slope = lf.slope;
  out.fit.intercept = lf.intercept;
  out.fit.r_squared = lf.r_squared;
  out.fit.offset_slopes = {lf.slope};
  out.fit.offset_spread = 0.0;
  out.fit.scale_window = {scales.back(), scales[first]};
  out.verdict = std::abs(lf.slope) <= 0.15 ? "positive"
              : lf.slope <= -0.3           ? "null"
                                           : "inconclusive";
  return out;
}

PositivityVerdict lebesgue_positivity(const DiscreteMeasure& mu) {
  return lebesgue_positivity(mu.points, mu.ambient_dim, mu.resolution);
}

SpatialEnergy riesz_energy_spatial(const DiscreteMeasure& mu, double s) {
  if (!(s > 0.0) || s >= double(mu.ambient_dim)) {
    fail("bad_exponent", "s must lie in (0, ambient_dim)");
  }
  const int d = mu.ambient_dim;
  const double res = mu.resolution;
  const std::size_t n = mu.atom_count();
  SpatialEnergy out;
  KahanSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = mu.atom(i);
    double wi = mu.weights[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      const double* xj = mu.atom(j);
      for (int k = 0; k < d; ++k) {
        double t = xi[k] - xj[k];
        r2 += t * t;
      }
      double r = std::sqrt(r2);
      if (r < res) {
        r = res;
        ++out.clamped_pairs;
      } else if (r == 0.0) {
        out.infinite = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
      acc.add(2.0 * wi * mu.weights[j] * std::pow(r, -s));
    }
  }
  out.value = acc.value();
  return out;
}

namespace {

// I_s sweep helper: for 1-d uniform-weight measures the pair-distance multiset
// is compressed by sorting and run-length coding, which turns the per-s cost
// from O(n^2) into O(#distinct).
struct EnergySweep {
  std::vector<double> vals;
  std::vector<double> mass;  // summed 2 w_i w_j per distinct distance
  const DiscreteMeasure* mu = nullptr;

  explicit EnergySweep(const DiscreteMeasure& m) {
    bool uniform = m.ambient_dim == 1;
    for (std::size_t i = 1; uniform && i < m.atom_count(); ++i) {
      uniform = m.weights[i] == m.weights[0];
    }
    if (!uniform || m.atom_count() < 2) {
      mu = &m;
      return;
    }
    std::size_t n = m.atom_count();
    std::vector<double> diffs;
    diffs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      double xi = m.points[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        double r = std::abs(xi - m.points[j]);
        diffs.push_back(std::max(r, m.resolution));
      }
    }
    std::sort(diffs.begin(), diffs.end());
    double w2 = 2.0 * m.weights[0] * m.weights[0];
    for (std::size_t i = 0; i < diffs.size();) {
      std::size_t j = i;
      while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
      vals.push_back(diffs[i]);
      mass.push_back(w2 * double(j - i));
      i = j;
    }
  }

  double energy(double s) const {
    if (mu) return riesz_energy_spatial(*mu, s).value;
    KahanSum acc;
    for (std::size_t i = 0; i < vals.size(); ++i) acc.add(mass[i] * std::pow(vals[i], -s));
    return acc.value();
  }
};

}  // namespace

EnergyDimension energy_dimension(const ConstructedSet& cs, const std::vector<double>& s_grid) {
  if (s_grid.empty()) fail("bad_exponent", "empty s grid");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0) || s_grid[i] >= double(cs.measure.ambient_dim)) {
      fail("bad_exponent", "s grid must lie in (0, ambient_dim)");
    }
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) fail("bad_exponent", "s grid must increase");
  }

  EnergyDimension out;
  out.s_grid = s_grid;
  if (cs.measure.atom_count() <= 1) {
    out.flag = "zero_dimensional";
    out.value = 0.0;
    return out;
  }
  int level = cs.provenance.level;
  if (level < 2) fail("no_level_sweep", "provenance records fewer than 2 construction levels");

  int level_low = std::max(1, level - 4);
  int w = level - level_low;
  out.threshold = std::pow(1.5, double(w) / 4.0);

  ConstructedSet low = build_from_spec(with_level(cs.provenance, level_low));
  ConstructedSet high = build_from_spec(with_level(cs.provenance, level));
  EnergySweep sweep_low(low.measure), sweep_high(high.measure);

  double best = -1.0;
  for (double s : s_grid) {
    double e_low = sweep_low.energy(s);
    double e_high = sweep_high.energy(s);
    double growth = e_low > 0.0 ? e_high / e_low : std::numeric_limits<double>::infinity();
    out.growth.push_back(growth);
    if (std::isfinite(growth) && growth < out.threshold) best = std::max(best, s);
  }
  if (best < 0.0) {
    out.flag = "all_divergent";
    out.value = 0.0;
  } else {
    out.value = best;
  }
  return out;
}

}  // namespace fraclab
