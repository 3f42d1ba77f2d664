#include "fraclab/common.hpp"

#include <algorithm>
#include <thread>

namespace fraclab {

namespace {
std::size_t g_threads = 0;  // 0 = use hardware concurrency
}

void set_thread_count(std::size_t k) { g_threads = k; }

std::size_t thread_count() {
  if (g_threads > 0) return g_threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& block_fn) {
  if (n == 0) return;
  std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    block_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&block_fn, begin, end] { block_fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail("insufficient_scales", "fit_line needs at least two points");
  }
  std::size_t n = x.size();
  KahanSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  double mx = sx.value() / double(n);
  double my = sy.value() / double(n);
  KahanSum sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (sxx.value() <= 0.0) fail("insufficient_scales", "fit_line abscissae identical");
  LinearFit f;
  f.slope = sxy.value() / sxx.value();
  f.intercept = my - f.slope * mx;
  if (syy.value() > 0.0) {
    double ssr = syy.value() - f.slope * sxy.value();
    f.r_squared = std::clamp(1.0 - ssr / syy.value(), 0.0, 1.0);
  } else {
    f.r_squared = 1.0;  // perfectly flat data is a perfect fit
  }
  return f;
}

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    case 4: return 2.0 * kPi * kPi;
    default: return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
  }
}

double ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    case 4: return kPi * kPi / 2.0;
    default: return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  }
}

}  // namespace fraclab
