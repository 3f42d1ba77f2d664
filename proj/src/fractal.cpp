#include "fraclab/fractal.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab {

namespace {

DiscreteMeasure zero_point_measure(double resolution) {
  DiscreteMeasure z;
  z.ambient_dim = 1;
  z.points = {0.0};
  z.weights = {1.0};
  z.total_mass = 1.0;
  z.resolution = resolution;
  return z;
}

}  // namespace

ConstructedSet build_cantor_ratio(double ratio, int level) {
  if (!(ratio > 0.0) || ratio > 0.5) fail("bad_ratio", "contraction ratio must be in (0, 1/2]");
  if (level < 1) fail("bad_level", "level must be >= 1");
  if (level >= 63 || (std::size_t(1) << level) > kProductAtomCap) {
    fail("too_large", "2^level exceeds the atom cap");
  }
  std::size_t n = std::size_t(1) << level;
  double rk = 1.0;
  for (int i = 0; i < level; ++i) rk *= ratio;
  double half = rk / 2.0;
  double w = std::ldexp(1.0, -level);  // exact 2^-level

  DiscreteMeasure mu;
  mu.ambient_dim = 1;
  mu.points.resize(n);
  mu.weights.assign(n, w);
  mu.resolution = rk;
  // Address bits select the branch at each level, most significant first;
  // iterating the two contractions left-to-right lands on the interval's left
  // endpoint, the atom is its midpoint.
  for (std::size_t a = 0; a < n; ++a) {
    double x = 0.0;
    for (int b = level - 1; b >= 0; --b) {
      x = ((a >> b) & 1u) ? ratio * x + (1.0 - ratio) : ratio * x;
    }
    mu.points[a] = x + half;
  }
  mu.total_mass = double(n) * w;  // exact: n * 2^-level = 1

  ConstructedSet cs;
  cs.measure = std::move(mu);
  cs.nominal_dimension = std::log(2.0) / std::log(1.0 / ratio);
  cs.resolution = rk;
  cs.provenance.kind = "central_cantor";
  cs.provenance.dimension_target = cs.nominal_dimension;
  cs.provenance.level = level;
  cs.provenance.ratio = ratio;
  return cs;
}

ConstructedSet build_cantor(double s, int level) {
  if (!(s > 0.0) || s > 1.0) fail("bad_dimension", "dimension must be in (0, 1]");
  double ratio = std::exp2(-1.0 / s);
  ConstructedSet cs = build_cantor_ratio(ratio, level);
  cs.nominal_dimension = s;  // exact target, not the round-tripped log ratio
  cs.provenance.dimension_target = s;
  return cs;
}

ConstructedSet build_product(const ConstructedSet& a, const ConstructedSet& b) {
  ConstructedSet cs;
  cs.measure = product_measure(a.measure, b.measure);
  int d = cs.measure.ambient_dim;
  cs.nominal_dimension = std::min(a.nominal_dimension + b.nominal_dimension, double(d));
  cs.resolution = cs.measure.resolution;
  cs.provenance.kind = "product";
  cs.provenance.level = std::max(a.provenance.level, b.provenance.level);
  cs.provenance.children = {a.provenance, b.provenance};
  return cs;
}

ConstructedSet build_sharpness_A(double s, int level) {
  ConstructedSet c = build_cantor(s, level);
  std::size_t m = std::size_t(std::lround(1.0 / c.resolution));
  if (m < 1) m = 1;
  std::size_t n_cantor = std::size_t(1) << level;
  if (m != 0 && n_cantor > kProductAtomCap / m / m) {
    fail("too_large", "sharpness_A atom count exceeds the cap");
  }
  DiscreteMeasure grid = uniform_grid_1d(m);
  DiscreteMeasure zero = zero_point_measure(c.resolution);

  DiscreteMeasure a = product_measure(c.measure, grid);
  a = product_measure(a, zero);
  a = product_measure(a, grid);

  ConstructedSet cs;
  cs.measure = std::move(a);
  cs.nominal_dimension = 2.0 + s;
  cs.resolution = cs.measure.resolution;
  cs.provenance.kind = "sharpness_A";
  cs.provenance.dimension_target = s;
  cs.provenance.level = level;
  return cs;
}

ConstructedSet build_sharpness_B(double s, int level) {
  ConstructedSet c = build_cantor(s, level);
  std::size_t n_cantor = std::size_t(1) << level;
  if (n_cantor > kProductAtomCap / n_cantor) fail("too_large", "sharpness_B atom count exceeds the cap");
  DiscreteMeasure zero = zero_point_measure(c.resolution);

  DiscreteMeasure b = product_measure(zero, c.measure);
  b = product_measure(b, zero);
  b = product_measure(b, c.measure);

  ConstructedSet cs;
  cs.measure = std::move(b);
  cs.nominal_dimension = 2.0 * s;
  cs.resolution = cs.measure.resolution;
  cs.provenance.kind = "sharpness_B";
  cs.provenance.dimension_target = s;
  cs.provenance.level = level;
  return cs;
}

ConstructedSet difference_set(const ConstructedSet& c) {
  const DiscreteMeasure& mu = c.measure;
  if (mu.ambient_dim != 1) fail("dimension", "difference_set needs a 1-d input");
  std::size_t n = mu.atom_count();
  if (n > kProductAtomCap / n) fail("too_large", "difference set exceeds the atom cap");

  DiscreteMeasure out;
  out.ambient_dim = 1;
  out.points.resize(n * n);
  out.weights.resize(n * n);
  out.resolution = 2.0 * mu.resolution;  // x - y varies by twice the cell width
  for (std::size_t i = 0; i < n; ++i) {
    double xi = mu.points[i], wi = mu.weights[i];
    for (std::size_t j = 0; j < n; ++j) {
      out.points[i * n + j] = xi - mu.points[j];
      out.weights[i * n + j] = wi * mu.weights[j];
    }
  }
  KahanSum total;
  for (double w : out.weights) total.add(w);
  out.total_mass = total.value();

  // For a central Cantor child with ratio r <= 1/3 the difference set is the
  // attractor of three ratio-r contractions with disjoint (touching at 1/3)
  // images: branch gap 1 - 3r >= 0. Its dimension is log 3 / log(1/r), which
  // exceeds the child's log 2 / log(1/r); the child dimension survives only as
  // the Frostman exponent of the difference measure (mass 2^-k concentrates in
  // the radius-r^k ball at 0). Above ratio 1/3 the set fills [-1, 1].
  double ratio = c.provenance.ratio;
  double nominal;
  if (c.provenance.kind == "central_cantor" && ratio > 0.0 && ratio <= 1.0 / 3.0) {
    nominal = std::min(1.0, std::log(3.0) / std::log(1.0 / ratio));
  } else {
    nominal = std::min(1.0, 2.0 * c.nominal_dimension);  // generic sumset cap
  }
  ConstructedSet cs;
  cs.measure = std::move(out);
  cs.nominal_dimension = nominal;
  cs.resolution = cs.measure.resolution;
  cs.provenance.kind = "difference_set";
  cs.provenance.level = c.provenance.level;
  cs.provenance.children = {c.provenance};
  return cs;
}

ConstructedSet affine_embed(const ConstructedSet& c) {
  const DiscreteMeasure& mu = c.measure;
  int d = mu.ambient_dim;
  DiscreteMeasure out;
  out.ambient_dim = d + 1;
  out.points.resize(mu.atom_count() * std::size_t(d + 1));
  out.weights = mu.weights;
  out.total_mass = mu.total_mass;
  out.resolution = mu.resolution;
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    const double* x = mu.atom(i);
    double* y = out.points.data() + i * std::size_t(d + 1);
    std::copy(x, x + d, y);
    y[d] = 0.0;
  }
  if (!mu.factors.empty()) {
    out.factors = mu.factors;
    DiscreteMeasure z = zero_point_measure(mu.resolution);
    out.factors.push_back(std::move(z));
  }

  ConstructedSet cs;
  cs.measure = std::move(out);
  cs.nominal_dimension = c.nominal_dimension;
  cs.resolution = c.resolution;
  cs.provenance.kind = "affine_embed";
  cs.provenance.level = c.provenance.level;
  cs.provenance.children = {c.provenance};
  return cs;
}

DiscreteMeasure uniform_grid_1d(std::size_t m) {
  if (m == 0) fail("empty_measure", "grid needs at least one atom");
  DiscreteMeasure g;
  g.ambient_dim = 1;
  g.points.resize(m);
  g.weights.assign(m, 1.0 / double(m));
  g.resolution = 1.0 / double(m);
  for (std::size_t i = 0; i < m; ++i) g.points[i] = (double(i) + 0.5) / double(m);
  KahanSum total;
  for (double w : g.weights) total.add(w);
  g.total_mass = total.value();
  return g;
}

DiscreteMeasure circle_measure(std::size_t m) {
  if (m < 3) fail("empty_measure", "circle needs at least three atoms");
  DiscreteMeasure c;
  c.ambient_dim = 2;
  c.points.resize(2 * m);
  c.weights.assign(m, 1.0 / double(m));
  c.resolution = 2.0 * kPi / double(m);
  for (std::size_t i = 0; i < m; ++i) {
    double phi = 2.0 * kPi * double(i) / double(m);
    c.points[2 * i] = std::cos(phi);
    c.points[2 * i + 1] = std::sin(phi);
  }
  KahanSum total;
  for (double w : c.weights) total.add(w);
  c.total_mass = total.value();
  return c;
}

ConstructedSet build_from_spec(const FractalSpec& spec) {
  auto need_children = [&spec](std::size_t k) {
    if (spec.children.size() != k) {
      fail("bad_children", "kind '" + spec.kind + "' expects " + std::to_string(k) + " children");
    }
  };
  if (spec.kind == "central_cantor") {
    need_children(0);
    ConstructedSet cs = spec.ratio > 0.0 ? build_cantor_ratio(spec.ratio, spec.level)
                                         : build_cantor(spec.dimension_target, spec.level);
    return cs;
  }
  if (spec.kind == "product") {
    need_children(2);
    return build_product(build_from_spec(spec.children[0]), build_from_spec(spec.children[1]));
  }
  if (spec.kind == "sharpness_A") {
    need_children(0);
    return build_sharpness_A(spec.dimension_target, spec.level);
  }
  if (spec.kind == "sharpness_B") {
    need_children(0);
    return build_sharpness_B(spec.dimension_target, spec.level);
  }
  if (spec.kind == "difference_set") {
    need_children(1);
    return difference_set(build_from_spec(spec.children[0]));
  }
  if (spec.kind == "affine_embed") {
    need_children(1);
    return affine_embed(build_from_spec(spec.children[0]));
  }
  fail("unknown_kind", "no such fractal kind: '" + spec.kind + "'");
}

FractalSpec with_level(FractalSpec spec, int level) {
  spec.level = level;
  for (auto& c : spec.children) c = with_level(c, level);
  return spec;
}

}  // namespace fraclab
