#include "itermean/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"
#include "itermean/kernels.hpp"
#include "itermean/series.hpp"

namespace itermean {

using detail::fmt_double;

GroupoidOp check_bisymmetry(GroupoidOp op, const NumericsConfig& cfg) {
  if (op.kind != OpKind::Custom) {
    op.bisymmetry = Bisymmetry::Certified;
    op.witness.reset();
    return op;
  }
  // every other mean-grid point keeps the quadruple count at 11^4
  const auto all = cfg.mean_grid.points();
  std::vector<double> s;
  for (std::size_t i = 0; i < all.size(); i += 2) s.push_back(all[i]);

  for (double u : s)
    for (double v : s)
      for (double w : s)
        for (double z : s) {
          const double lhs = op(op(u, v), op(w, z));
          const double rhs = op(op(u, w), op(v, z));
          const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
          if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
            throw DomainError("operation '" + op.name + "' is not finite on the sample grid");
          }
          if (std::abs(lhs - rhs) > cfg.internal_tol * scale) {
            op.bisymmetry = Bisymmetry::Refuted;
            op.witness = std::array<double, 4>{u, v, w, z};
            return op;
          }
        }
  op.bisymmetry = Bisymmetry::Certified;
  op.witness.reset();
  return op;
}

namespace {

double hypothesis_residual(const MonotoneMap& a, const MonotoneMap& b, const GroupoidOp& op,
                           const NumericsConfig& cfg) {
  const MonotoneMap ab = compose(a, b);
  const auto xs = cfg.mean_grid.points();
  const auto r = kernels::map1d(
      xs,
      [&](double x) {
        const double lhs = op(a.eval(x), b.eval(x));
        const double rhs = ab.eval(x);
        return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
      },
      cfg.parallel);
  return *std::max_element(r.begin(), r.end());
}

}  // namespace

CompositeTriple build_triple(const MonotoneMap& f, const MonotoneMap& g, const MonotoneMap& h,
                             GroupoidOp op, const NumericsConfig& cfg) {
  if (op.bisymmetry == Bisymmetry::Unchecked) op = check_bisymmetry(std::move(op), cfg);
  if (op.bisymmetry == Bisymmetry::Refuted) {
    throw std::invalid_argument("operation '" + op.name + "' is not bisymmetric");
  }
  const MonotoneMap fg = compose(f, g);
  const MonotoneMap gh = compose(g, h);
  CompositeTriple t{f,
                    g,
                    h,
                    op,
                    make_D(f, g, op, cfg),
                    make_D(g, h, op, cfg),
                    make_D(fg, gh, op, cfg),
                    0.0,
                    0.0};
  t.hypothesis_fg = hypothesis_residual(f, g, op, cfg);
  t.hypothesis_gh = hypothesis_residual(g, h, op, cfg);
  return t;
}

InvarianceReport invariance_residual(const CompositeTriple& t, const NumericsConfig& cfg) {
  InvarianceReport rep;
  rep.hypothesis_fg = t.hypothesis_fg;
  rep.hypothesis_gh = t.hypothesis_gh;
  rep.hypotheses_met = t.hypothesis_fg <= cfg.hypothesis_tol && t.hypothesis_gh <= cfg.hypothesis_tol;

  const auto xs = cfg.mean_grid.points();
  auto residual = [&](double x, double y) {
    const double direct = t.D_fggh(x, y);
    const double via = t.D_fggh(t.D_fg(x, y), t.D_gh(x, y));
    return std::abs(via - direct) / (1.0 + std::abs(direct));
  };
  // one serial probe so an unevaluable map fails once instead of at every grid point
  (void)residual(xs.front(), xs.back());
  const auto r = kernels::map2d(xs, xs, residual, cfg.parallel);
  const std::size_t n = xs.size();
  rep.max_residual = -1.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] > rep.max_residual) {
      rep.max_residual = r[k];
      rep.witness_x = xs[k / n];
      rep.witness_y = xs[k % n];
    }
  }
  return rep;
}

GaussTrace gauss_iterate(const MeanObject& m1, const MeanObject& m2, double x0, double y0,
                         const NumericsConfig& cfg) {
  GaussTrace tr;
  double x = x0, y = y0;
  tr.iterates.emplace_back(x, y);
  auto done = [&] {
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) <= std::max(cfg.gauss_tol, floor);
  };
  while (!done()) {
    if (tr.iterations >= cfg.gauss_max_iters) {
      tr.message = "no convergence within " + std::to_string(cfg.gauss_max_iters) + " iterations";
      tr.limit = 0.5 * (x + y);
      return tr;
    }
    const double nx = m1(x, y);
    const double ny = m2(x, y);
    x = nx;
    y = ny;
    ++tr.iterations;
    tr.iterates.emplace_back(x, y);
  }
  tr.converged = true;
  tr.limit = 0.5 * (x + y);
  return tr;
}

NestedMaps theorem3_construct(const MonotoneMap& h, const NumericsConfig& cfg) {
  NumericsConfig inner = cfg;
  inner.series_tol = cfg.series_tol / 10.0;
  MonotoneMap g = build_f_from_g(h, inner);
  MonotoneMap f = build_f_from_g(g, cfg);
  return {std::move(g), std::move(f)};
}

Eq11Report eq11_residual(const MonotoneMap& h, std::span<const double> xs, const NumericsConfig& cfg) {
  Eq11Report rep;
  rep.h_label = h.label();
  rep.series_tol = cfg.series_tol;
  rep.points.resize(xs.size());

  NumericsConfig inner = cfg;
  inner.series_tol = cfg.series_tol / 10.0;
  std::optional<MonotoneMap> G, Gh;
  std::string setup_error;
  try {
    G = build_f_from_g(h, inner);
    Gh = compose(*G, h);
  } catch (const Error& e) {
    setup_error = e.what();
  }

  for (std::size_t i = 0; i < xs.size(); ++i) {
    Eq11Point& p = rep.points[i];
    p.x = xs[i];
    if (!G) {
      p.error = setup_error;
      continue;
    }
    try {
      p.inner_terms = sum_inverse_iterates_detail(h, p.x, inner).terms_used;
      const double Gx = G->eval(p.x);
      const auto lhs = sum_inverse_iterates_detail(*G, p.x, cfg);
      const auto rhs = sum_inverse_iterates_detail(*Gh, p.x, cfg);
      p.lhs = Gx + lhs.value;
      p.rhs = rhs.value;
      p.lhs_terms = lhs.terms_used;
      p.rhs_terms = rhs.terms_used;
      p.residual = std::abs(p.lhs - p.rhs);
      p.ok = true;
    } catch (const Error& e) {
      p.error = e.what();
    }
  }
  for (const auto& p : rep.points) {
    if (p.ok) {
      rep.max_residual = std::max(rep.max_residual, p.residual);
    } else {
      ++rep.failed_points;
    }
  }
  return rep;
}

double remark7_violation(double a, double b, double c) {
  return std::max({std::abs(a * b - a - b), std::abs(b * c - b - c),
                   std::abs(a * b * b * c - a * b - b * c)});
}

std::vector<double> remark7_axis(const NumericsConfig& cfg) {
  const auto n = static_cast<std::size_t>(std::llround((cfg.remark7_hi - cfg.remark7_lo) / cfg.remark7_step));
  std::vector<double> axis(n + 1);
  for (std::size_t i = 0; i <= n; ++i) axis[i] = cfg.remark7_lo + static_cast<double>(i) * cfg.remark7_step;
  return axis;
}

Remark7Report remark7_check(const NumericsConfig& cfg) {
  Remark7Report rep;
  auto& tr = rep.elimination_trace;

  tr.push_back("system: ab = a + b, bc = b + c, ab^2c = ab + bc, with a, b, c >= 1");
  // boundary values first: each turns one of the first two equations into t = t + 1
  tr.push_back("a = 1: ab = a + b becomes b = 1 + b, impossible");
  tr.push_back("b = 1: ab = a + b becomes a = a + 1, impossible");
  tr.push_back("c = 1: bc = b + c becomes b = b + 1, impossible");
  tr.push_back("so a, b, c > 1; from ab = a + b: a = b/(b - 1); from bc = b + c: c = b/(b - 1)");
  tr.push_back("divide ab^2c = ab + bc by b > 0: abc = a + c");
  tr.push_back("substitute: b^3/(b - 1)^2 = 2b/(b - 1), i.e. b^2 = 2(b - 1), i.e. b^2 - 2b + 2 = 0");
  const double disc = 2.0 * 2.0 - 4.0 * 1.0 * 2.0;
  tr.push_back("discriminant of b^2 - 2b + 2 is " + fmt_double(disc) + " < 0: no real b");
  rep.algebra_infeasible = disc < 0.0;

  const auto axis = remark7_axis(cfg);
  rep.points_per_axis = axis.size();
  rep.step = cfg.remark7_step;
  auto fn = [](double a, double b, double c) { return remark7_violation(a, b, c); };
  const auto best = cfg.parallel ? kernels::min3d(axis, fn) : kernels::min3d_serial(axis, fn);
  rep.grid_min_violation = best.value;
  rep.grid_argmin = {axis[best.i], axis[best.j], axis[best.k]};
  tr.push_back("lattice scan over [" + fmt_double(cfg.remark7_lo) + ", " + fmt_double(cfg.remark7_hi) +
               "]^3 at step " + fmt_double(cfg.remark7_step) + ": minimum violation " +
               fmt_double(rep.grid_min_violation) + " at (" + fmt_double(rep.grid_argmin[0]) + ", " +
               fmt_double(rep.grid_argmin[1]) + ", " + fmt_double(rep.grid_argmin[2]) + ")");
  rep.feasible = !(rep.algebra_infeasible && rep.grid_min_violation > 0.0);
  return rep;
}

}  // namespace itermean
