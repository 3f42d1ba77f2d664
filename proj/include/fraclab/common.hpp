#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

// Every failed precondition throws this; `code()` is a stable machine-checkable
// name, the what() string adds context for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what_arg)
      : std::runtime_error(code + ": " + what_arg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(code, msg);
}

// Compensated accumulator; double sums over ~1e7 terms lose ~1e-10 relative
// accuracy otherwise, which matters for the 1e-12 mass invariants.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// splitmix64; used to derive independent seeds per sample index so results do
// not depend on thread layout or evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Worker count for data-parallel loops. Default 0 = hardware concurrency.
void set_thread_count(std::size_t k);
std::size_t thread_count();

// Runs block_fn(begin, end) over a partition of [0, n). Callers must write
// results indexed by position; then the outcome is schedule-independent.
void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& block_fn);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

// Ordinary least squares through (x_i, y_i). Needs >= 2 points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Surface area of the unit sphere S^{d-1} inside R^d (d = 1 gives 2 points).
double sphere_area(int d);
// Volume of the unit ball in R^d.
double ball_volume(int d);

constexpr double kPi = 3.14159265358979323846;

}  // namespace fraclab
