#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace itermean {

/// Log-spaced sample points over [lo, hi]. Endpoints are exact.
struct LogGrid {
  double lo = 0.1;
  double hi = 10.0;
  std::size_t n = 21;

  std::vector<double> points() const {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
      throw std::invalid_argument("LogGrid: need 0 < lo <= hi and n >= 1");
    }
    std::vector<double> xs(n);
    if (n == 1) {
      xs[0] = lo;
      return xs;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    xs.front() = lo;
    xs.back() = hi;
    // exp(log(1)) is exact, but snap decades so x = 1, 10, ... land exactly.
    for (auto& x : xs) {
      const double r = std::round(std::log10(x));
      if (std::abs(std::log10(x) - r) < 1e-12) x = std::pow(10.0, r);
    }
    return xs;
  }
};

/// Root-finding knobs shared by every numerical inversion.
struct RootOptions {
  double inverse_tol = 1e-12;       // |F(x) - y| <= tol * max(1, |y|)
  int max_root_iters = 200;
  int max_bracket_expansions = 1100;  // enough halvings to reach subnormals
};

struct NumericsConfig {
  RootOptions root;

  // series of inverse iterates
  double series_tol = 1e-12;
  double divergence_cap = 1e12;
  int max_terms = 10000;
  int divergence_patience = 64;  // consecutive non-decreasing terms before giving up
  bool collapse_linear = true;   // closed forms for x -> c*x

  // bijection validation and displacement classification
  LogGrid validation_grid{1e-6, 1e6, 256};

  // mean checks and residual sweeps (the 21x21 grid is the square of this axis)
  LogGrid mean_grid{0.1, 10.0, 21};
  double reflexive_tol = 1e-8;
  double internal_tol = 1e-10;
  double hypothesis_tol = 1e-8;

  // Gauss iteration
  double gauss_tol = 1e-12;
  int gauss_max_iters = 1000;

  // algebraic scan of the derivative system at zero
  double remark7_lo = 1.0;
  double remark7_hi = 10.0;
  double remark7_step = 0.05;

  bool parallel = true;
};

}  // namespace itermean
