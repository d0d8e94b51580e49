#include "itermean/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"
#include "itermean/kernels.hpp"
#include "itermean/series.hpp"

namespace itermean {

using detail::fmt_double;

const char* to_string(Bisymmetry b) {
  switch (b) {
    case Bisymmetry::Certified:
      return "certified";
    case Bisymmetry::Refuted:
      return "refuted";
    case Bisymmetry::Unchecked:
      return "unchecked";
  }
  return "unchecked";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::D:
      return "D";
    case Provenance::IterativeFromG:
      return "iterative-from-g";
    case Provenance::IterativeFromR:
      return "iterative-from-r";
    case Provenance::Multiplicative:
      return "multiplicative";
    case Provenance::GWQAM:
      return "gwqam";
    case Provenance::Arithmetic:
      return "arithmetic";
    case Provenance::Scaled:
      return "scaled";
    case Provenance::Custom:
      return "custom";
  }
  return "custom";
}

GroupoidOp GroupoidOp::addition() {
  return {OpKind::Addition, "add", [](double u, double v) { return u + v; },
          Bisymmetry::Certified, std::nullopt};
}

GroupoidOp GroupoidOp::multiplication() {
  return {OpKind::Multiplication, "mul", [](double u, double v) { return u * v; },
          Bisymmetry::Certified, std::nullopt};
}

GroupoidOp GroupoidOp::custom(std::string name, std::function<double(double, double)> fn) {
  return {OpKind::Custom, std::move(name), std::move(fn), Bisymmetry::Unchecked, std::nullopt};
}

MeanObject::MeanObject(std::function<double(double, double)> fn, Provenance provenance,
                       std::string description)
    : fn_(std::move(fn)), provenance_(provenance), description_(std::move(description)) {}

MeanObject MeanObject::with_checks(MeanCheckReport report) const {
  MeanObject out = *this;
  out.checks_ = std::make_shared<const MeanCheckReport>(std::move(report));
  return out;
}

namespace {

MeanObject make_D_as(const MonotoneMap& f, const MonotoneMap& g, const GroupoidOp& op,
                     const NumericsConfig& cfg, Provenance prov, std::string description) {
  const MonotoneMap fg = compose(f, g);
  const RootOptions root = cfg.root;
  auto fn = [f, g, fg, op, root](double x, double y) {
    return fg.inverse_eval(op(f.eval(x), g.eval(y)), root);
  };
  return MeanObject(std::move(fn), prov, std::move(description));
}

}  // namespace

MeanObject make_D(const MonotoneMap& f, const MonotoneMap& g, const GroupoidOp& op,
                  const NumericsConfig& cfg) {
  return make_D_as(f, g, op, cfg, op.kind == OpKind::Multiplication ? Provenance::Multiplicative : Provenance::D,
                   "D[f=" + f.label() + ", g=" + g.label() + ", op=" + op.name + "]");
}

MeanObject make_iterative_mean(const MonotoneMap& g, const NumericsConfig& cfg) {
  const MonotoneMap f = build_f_from_g(g, cfg);
  return make_D_as(f, g, GroupoidOp::addition(), cfg, Provenance::IterativeFromG,
                   "iterative mean of generator g=" + g.label());
}

MeanObject make_iterative_mean_from_r(const MonotoneMap& r, const NumericsConfig& cfg) {
  const auto cls = classify_displacement(r, cfg);
  if (cls.verdict != Displacement::Below) {
    throw DivergenceError("generator r=" + r.label() + " must satisfy 0 < r(x) < x (found " +
                          to_string(cls.verdict) + ")");
  }
  const MonotoneMap g = r.inverse(cfg.root);
  const MonotoneMap f = build_f_from_g(g, cfg);
  return make_D_as(f, g, GroupoidOp::addition(), cfg, Provenance::IterativeFromR,
                   "iterative mean of generator r=" + r.label());
}

MeanObject make_C(const MonotoneMap& f, const MonotoneMap& g, const NumericsConfig& cfg) {
  return make_D_as(f, g, GroupoidOp::multiplication(), cfg, Provenance::Multiplicative,
                   "C[f=" + f.label() + ", g=" + g.label() + "]");
}

MeanObject make_gwqam(const MonotoneMap& phi, const MonotoneMap& psi, const NumericsConfig& cfg) {
  const MonotoneMap s = pointwise_sum(phi, psi);
  const RootOptions root = cfg.root;
  auto fn = [phi, psi, s, root](double x, double y) {
    return s.inverse_eval(phi.eval(x) + psi.eval(y), root);
  };
  return MeanObject(std::move(fn), Provenance::GWQAM,
                    "M[phi=" + phi.label() + ", psi=" + psi.label() + "]");
}

MeanObject arithmetic_mean() {
  return MeanObject([](double x, double y) { return 0.5 * (x + y); }, Provenance::Arithmetic, "A");
}

MeanObject scaled(const MeanObject& m, double factor) {
  return MeanObject([m, factor](double x, double y) { return factor * m(x, y); }, Provenance::Scaled,
                    fmt_double(factor) + "*" + m.description());
}

namespace {

// Keeps the largest violation; ties go to the first in grid order.
void record(AxiomResult& r, double x, double y, double value, double violation) {
  r.pass = false;
  if (!r.witness || violation > r.witness->violation) r.witness = Witness{x, y, value, violation};
}

}  // namespace

MeanCheckReport check_mean(const MeanObject& m, const NumericsConfig& cfg) {
  MeanCheckReport rep;
  rep.grid = cfg.mean_grid;
  rep.reflexive_tol = cfg.reflexive_tol;
  rep.internal_tol = cfg.internal_tol;

  const auto xs = cfg.mean_grid.points();
  const std::size_t n = xs.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto v = kernels::map2d(
      xs, xs,
      [&](double x, double y) {
        try {
          const double r = m(x, y);
          return std::isfinite(r) ? r : nan;
        } catch (const Error&) {
          return nan;
        }
      },
      cfg.parallel);
  auto at = [&](std::size_t i, std::size_t j) { return v[i * n + j]; };

  for (std::size_t i = 0; i < n && !rep.partial; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(at(i, j))) {
        rep.partial = true;
        rep.partial_witness = Witness{xs[i], xs[j], nan, 0.0};
        try {
          (void)m(xs[i], xs[j]);
          rep.partial_reason = "non-finite value";
        } catch (const Error& e) {
          rep.partial_reason = e.what();
        }
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = xs[i], y = xs[j], val = at(i, j);
      if (std::isnan(val)) continue;
      const double lo = std::min(x, y), hi = std::max(x, y);
      const double scale = std::max(1.0, hi);
      const double slack = cfg.internal_tol * scale;

      if (i == j) {
        const double dev = std::abs(val - x) / std::max(1.0, x);
        if (dev > cfg.reflexive_tol) record(rep.reflexive, x, y, val, dev);
      }
      if (val < lo - slack || val > hi + slack) {
        record(rep.internal, x, y, val, std::max(lo - val, val - hi) / scale);
      }
      if (i != j) {
        const double margin = std::min(val - lo, hi - val);
        if (!(margin > slack)) record(rep.strict, x, y, val, (slack - margin) / scale);
        const double other = at(j, i);
        if (!std::isnan(other) && std::abs(val - other) > slack) {
          record(rep.symmetric, x, y, val, std::abs(val - other) / scale);
        }
      }
      if (i + 1 < n && !std::isnan(at(i + 1, j)) && !(at(i + 1, j) > val)) {
        record(rep.increasing, x, y, val, (val - at(i + 1, j)) / scale);
      }
      if (j + 1 < n && !std::isnan(at(i, j + 1)) && !(at(i, j + 1) > val)) {
        record(rep.increasing, x, y, val, (val - at(i, j + 1)) / scale);
      }
    }
  }
  return rep;
}

Remark3Report remark3_reduction(const MonotoneMap& f, double c, const NumericsConfig& cfg) {
  Remark3Report rep;
  const MonotoneMap g = shifted(f, c);
  const auto xs = cfg.mean_grid.points();

  for (double x : xs) {
    try {
      (void)f.eval(x);
      (void)g.eval(x);
    } catch (const DomainError& e) {
      rep.hypothesis_ok = false;
      rep.hypothesis_witness_x = x;
      rep.hypothesis_message = std::string("f or f+c leaves (0, inf): ") + e.what();
      return rep;
    }
  }
  rep.hypothesis_ok = true;

  for (double x : xs) {
    const double fx = f.eval(x);
    const double target = 2.0 * fx + c;
    double lhs;
    try {
      lhs = f.eval(fx + c);
    } catch (const DomainError&) {
      lhs = std::numeric_limits<double>::infinity();
    }
    rep.identity_residual = std::max(rep.identity_residual, std::abs(lhs - target) / (1.0 + std::abs(target)));
    rep.linear_form_residual =
        std::max(rep.linear_form_residual, std::abs(fx - (2.0 * x - c)) / (1.0 + std::abs(fx)));
  }

  const MeanObject D = make_D(f, g, GroupoidOp::addition(), cfg);
  rep.checks = check_mean(D, cfg);
  if (!rep.checks.partial) {
    const auto dev = kernels::map2d(
        xs, xs, [&](double x, double y) { return std::abs(D(x, y) - 0.5 * (x + y)) / std::max(1.0, std::max(x, y)); },
        cfg.parallel);
    for (double d : dev) rep.deviation_from_arithmetic = std::max(rep.deviation_from_arithmetic, d);
  } else {
    rep.deviation_from_arithmetic = std::numeric_limits<double>::infinity();
  }
  rep.reduces_to_arithmetic = rep.identity_residual <= cfg.reflexive_tol &&
                              rep.linear_form_residual <= cfg.reflexive_tol &&
                              rep.deviation_from_arithmetic <= cfg.reflexive_tol;
  return rep;
}

PairResidual symmetry_criterion_residual(const MonotoneMap& f, const MonotoneMap& g,
                                         const GroupoidOp& op, const NumericsConfig& cfg) {
  const MonotoneMap phi = compose(f, g.inverse(cfg.root));
  const auto xs = cfg.mean_grid.points();
  const auto res = kernels::map2d(
      xs, xs,
      [&](double x, double y) {
        const double a = op(phi.eval(x), y);
        const double b = op(phi.eval(y), x);
        return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
      },
      cfg.parallel);
  PairResidual out;
  const std::size_t n = xs.size();
  for (std::size_t k = 0; k < res.size(); ++k) {
    if (res[k] > out.max_residual) out = {res[k], xs[k / n], xs[k % n]};
  }
  return out;
}

}  // namespace itermean
