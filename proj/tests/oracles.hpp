#pragma once

// Test-side reference computations. Nothing here calls the library's root
// finder or series code, so agreement is evidence rather than tautology.

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

// Example 2 generator r(x) = p x^2 / (x + 1).
inline double r_example2(double x, double p = 0.5) { return p * x * x / (x + 1.0); }

/// Plain bisection for an increasing F on [lo, hi]; 200 halvings reach the
/// resolution of a double for any bracket that fits in the exponent range.
inline double bisect(const std::function<double(double)>& F, double y, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (F(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// sum_{k=0}^{terms-1} r^k(x) by forward iteration.
inline double forward_sum(double x, int terms = 200, double p = 0.5) {
  double term = x, sum = x;
  for (int k = 1; k < terms; ++k) {
    term = r_example2(term, p);
    sum += term;
  }
  return sum;
}

// For the Example 2 generator: g = r^-1, f = sum r^k, and D_r(x, y) solves
// f(g(t)) = f(x) + g(y). Every inversion is a wide bisection.
inline double g_example2(double y) {
  return bisect([](double t) { return r_example2(t); }, y, 0.0, 4.0 * y + 4.0);
}

inline double D_example2(double x, double y) {
  const double target = forward_sum(x) + g_example2(y);
  return bisect([](double t) { return forward_sum(g_example2(t)); }, target, 1e-9, 1e3);
}

/// Deterministic stream of uniform draws; fixed seed per call site.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    // hand-rolled so the sequence is identical across standard libraries
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
