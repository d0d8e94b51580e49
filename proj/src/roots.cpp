#include "itermean/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"

namespace itermean {

using detail::fmt_double;

RootResult solve_increasing(const std::function<double(double)>& F, double y,
                            const RootOptions& opts) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError("inverse requested at y = " + fmt_double(y) + " outside (0, inf)");
  }
  auto gap = [&](double x) { return F(x) - y; };

  int expansions = 0;
  double lo = 1.0, hi = 1.0;
  double glo = gap(1.0), ghi = glo;
  if (glo == 0.0) return {1.0, 0.0, 0, 0};

  if (glo < 0.0) {
    hi = 2.0;
    ghi = gap(hi);
    while (ghi < 0.0) {
      if (++expansions > opts.max_bracket_expansions || !std::isfinite(2.0 * hi)) {
        throw BracketError("no upper bracket for y = " + fmt_double(y) + " (map not onto near y?)");
      }
      lo = hi;
      glo = ghi;
      hi *= 2.0;
      ghi = gap(hi);
    }
  } else {
    lo = 0.5;
    glo = gap(lo);
    while (glo > 0.0) {
      if (++expansions > opts.max_bracket_expansions || lo * 0.5 == 0.0) {
        throw BracketError("no lower bracket for y = " + fmt_double(y) + " (map not onto near y?)");
      }
      hi = lo;
      ghi = glo;
      lo *= 0.5;
      glo = gap(lo);
    }
  }
  if (glo == 0.0) return {lo, 0.0, 0, expansions};
  if (ghi == 0.0) return {hi, 0.0, 0, expansions};

  const double strict_tol = opts.inverse_tol * y;
  const double loose_tol = opts.inverse_tol * std::max(1.0, y);

  bool bisect_next = false;
  int it = 0;
  for (; it < opts.max_root_iters; ++it) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    double x = mid;
    if (!bisect_next) {
      const double secant = lo - glo * width / (ghi - glo);
      if (secant > lo && secant < hi) x = secant;
    }
    if (!(x > lo && x < hi)) break;  // bracket is down to adjacent doubles

    const double gx = gap(x);
    if (std::abs(gx) <= strict_tol) return {x, gx, it + 1, expansions};
    if (gx < 0.0) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
      ghi = gx;
    }
    bisect_next = (hi - lo) > 0.5 * width;
  }

  const bool lo_better = std::abs(glo) <= std::abs(ghi);
  const double best = lo_better ? lo : hi;
  const double best_gap = lo_better ? glo : ghi;
  if (std::abs(best_gap) <= loose_tol) return {best, best_gap, it, expansions};
  throw ConvergenceError("inverse at y = " + fmt_double(y) + " stalled with residual " +
                         fmt_double(best_gap) + " after " + std::to_string(it) + " iterations");
}

}  // namespace itermean
