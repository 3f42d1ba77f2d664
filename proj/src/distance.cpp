#include "fraclab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraclab {

namespace {

// Structural identity, not object identity: a copy of mu is still "the same
// measure" and its distance measure carries the diagonal atom.
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.ambient_dim == b.ambient_dim && a.points == b.points && a.weights == b.weights;
}

double max_distance_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const int d = mu.ambient_dim;
  double bound2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
    double lo2 = lo1, hi2 = -lo1;
    for (std::size_t i = 0; i < mu.atom_count(); ++i) {
      lo1 = std::min(lo1, mu.atom(i)[k]);
      hi1 = std::max(hi1, mu.atom(i)[k]);
    }
    for (std::size_t i = 0; i < nu.atom_count(); ++i) {
      lo2 = std::min(lo2, nu.atom(i)[k]);
      hi2 = std::max(hi2, nu.atom(i)[k]);
    }
    double span = std::max(hi1 - lo2, hi2 - lo1);
    bound2 += span * span;
  }
  return std::sqrt(bound2);
}

}  // namespace

DistanceMeasure distance_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const BinSpec& bins) {
  if (mu.ambient_dim != nu.ambient_dim) fail("dimension", "ambient dimensions differ");
  if (!(bins.width > 0.0) || !std::isfinite(bins.width)) fail("bad_bins", "bin width must be positive");
  if (bins.width < std::max(mu.resolution, nu.resolution)) {
    fail("bins_too_fine", "bin width below the measure resolution");
  }

  double t_max = bins.t_max > 0.0 ? bins.t_max : max_distance_bound(mu, nu);
  std::size_t n_bins = std::size_t(std::ceil(t_max / bins.width));
  if (n_bins == 0) n_bins = 1;
  if (n_bins > 50'000'000) fail("bad_bins", "bin count is absurd");

  DistanceMeasure dm;
  dm.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) dm.bin_edges[i] = double(i) * bins.width;
  dm.masses.assign(n_bins, 0.0);
  dm.source_mass = mu.total_mass * nu.total_mass;

  const int d = mu.ambient_dim;
  const double w = bins.width;
  auto bin_of = [n_bins, w](double dist) {
    std::size_t b = std::size_t(dist / w);
    return std::min(b, n_bins - 1);
  };

  if (same_measure(mu, nu)) {
    KahanSum diag;
    for (double wi : mu.weights) diag.add(wi * wi);
    dm.diagonal_mass = diag.value();
    for (std::size_t i = 0; i < mu.atom_count(); ++i) {
      const double* xi = mu.atom(i);
      double wi = mu.weights[i];
      for (std::size_t j = i + 1; j < mu.atom_count(); ++j) {
        double r2 = 0.0;
        const double* xj = mu.atom(j);
        for (int k = 0; k < d; ++k) {
          double t = xi[k] - xj[k];
          r2 += t * t;
        }
        dm.masses[bin_of(std::sqrt(r2))] += 2.0 * wi * mu.weights[j];
      }
    }
  } else {
    for (std::size_t i = 0; i < mu.atom_count(); ++i) {
      const double* xi = mu.atom(i);
      double wi = mu.weights[i];
      for (std::size_t j = 0; j < nu.atom_count(); ++j) {
        double r2 = 0.0;
        const double* xj = nu.atom(j);
        for (int k = 0; k < d; ++k) {
          double t = xi[k] - xj[k];
          r2 += t * t;
        }
        dm.masses[bin_of(std::sqrt(r2))] += wi * nu.weights[j];
      }
    }
  }
  return dm;
}

L2Indicator distance_l2_indicator(const DistanceMeasure& dm) {
  if (dm.masses.size() < 2) fail("degenerate_bins", "need at least two bins");
  double w = dm.bin_edges[1] - dm.bin_edges[0];
  KahanSum fine;
  for (double m : dm.masses) fine.add(m * m / w);

  // Merge adjacent bins (doubled width) and compare; an L^2 density is stable
  // under the merge while atomic concentrations double per halving.
  KahanSum coarse;
  for (std::size_t i = 0; i < dm.masses.size(); i += 2) {
    double m = dm.masses[i] + (i + 1 < dm.masses.size() ? dm.masses[i + 1] : 0.0);
    coarse.add(m * m / (2.0 * w));
  }
  L2Indicator out;
  out.value = fine.value();
  out.refinement_ratio =
      coarse.value() > 0.0 ? fine.value() / coarse.value()
                           : std::numeric_limits<double>::infinity();
  return out;
}

double weighted_distance_pairing(const DistanceMeasure& dmu, const DistanceMeasure& dnu, int n) {
  if (dmu.bin_edges.size() != dnu.bin_edges.size() || dmu.bin_edges != dnu.bin_edges) {
    fail("bin_mismatch", "histograms must share identical bins");
  }
  double w = dmu.bin_edges[1] - dmu.bin_edges[0];
  KahanSum acc;
  for (std::size_t i = 0; i < dmu.masses.size(); ++i) {
    double mid = (dmu.bin_edges[i] + dmu.bin_edges[i + 1]) / 2.0;
    acc.add((dmu.masses[i] / w) * (dnu.masses[i] / w) * std::pow(mid, 1 - n) * w);
  }
  return acc.value();
}

}  // namespace fraclab
