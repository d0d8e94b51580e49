#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itermean/config.hpp"
#include "itermean/monotone.hpp"

namespace itermean {

/// One truncated evaluation of sum_{k>=0} g^{-k}(x).
struct SeriesValue {
  double value = 0.0;
  int terms_used = 0;          // index N of the last term added; 0 for closed forms
  double tail_estimate = 0.0;  // term_N * rho / (1 - rho)
};

/// S_N(x) = sum_{k=0}^{N} g^{-k}(x), stopping at the first N with
/// term_N <= tol * (1 + S_N) and a certified geometric tail <= tol.
///
/// Throws DivergenceError when the partial sum passes cfg.divergence_cap or
/// the term ratio stays >= 1 for cfg.divergence_patience steps, and
/// ConvergenceError when cfg.max_terms is reached without a tail certificate.
/// Linear g(x) = c*x sums in closed form when cfg.collapse_linear is set.
SeriesValue sum_inverse_iterates_detail(const MonotoneMap& g, double x, const NumericsConfig& cfg);

inline double sum_inverse_iterates(const MonotoneMap& g, double x, const NumericsConfig& cfg) {
  return sum_inverse_iterates_detail(g, x, cfg).value;
}

/// S_0(x), ..., S_{n-1}(x) without any stopping rule.
std::vector<double> partial_sums(const MonotoneMap& g, double x, int n, const RootOptions& root = {});

/// f = sum_{k>=0} g^{-k} as a map. Rejects g unless it is displaced above the
/// diagonal (DivergenceError otherwise: the series cannot converge).
MonotoneMap build_f_from_g(const MonotoneMap& g, const NumericsConfig& cfg);

/// sum_{k>=0} g^{-k+1}(x) = g(x) + sum_{k>=0} g^{-k}(x), i.e. (f o g)(x).
double shifted_series(const MonotoneMap& g, double x, const NumericsConfig& cfg);

/// Worst relative defect of f(g(x)) = f(x) + g(x) over the mean-grid axis.
struct ResidualReport {
  double max_residual = 0.0;
  double witness_x = 0.0;
  std::vector<double> xs, residuals;
};
ResidualReport reflexivity_residual(const MonotoneMap& f, const MonotoneMap& g,
                                    const NumericsConfig& cfg);

struct SeriesReport {
  bool converged = false;
  int terms_used = 0;          // max over the sampled points
  double tail_estimate = 0.0;  // max over the sampled points
  std::vector<std::pair<double, double>> values;  // (x, partial sum)
  std::optional<double> divergence_witness;
  std::string message;  // empty when converged
};

/// Runs the series at each x and summarizes. A cap hit without a tail
/// certificate leaves converged = false with no divergence witness.
SeriesReport series_report(const MonotoneMap& g, std::span<const double> xs,
                           const NumericsConfig& cfg);

}  // namespace itermean
