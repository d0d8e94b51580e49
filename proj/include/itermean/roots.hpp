#pragma once

#include <functional>

#include "itermean/config.hpp"

namespace itermean {

struct RootResult {
  double x;
  double residual;  // F(x) - y
  int iterations;
  int expansions;
};

/// Solves F(x) = y for x > 0 where F is strictly increasing on (0, inf).
///
/// The bracket starts at 1 and doubles upward or halves downward until it
/// straddles y; the bracket is then shrunk by bisection with a safeguarded
/// secant step. Stops once |F(x) - y| <= tol * |y|, or when the bracket
/// collapses to adjacent doubles and |F(x) - y| <= tol * max(1, |y|).
///
/// Throws BracketError if no bracket is found within
/// opts.max_bracket_expansions and ConvergenceError if the tolerance is not met.
RootResult solve_increasing(const std::function<double(double)>& F, double y,
                            const RootOptions& opts);

}  // namespace itermean
