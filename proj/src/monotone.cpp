#include "itermean/monotone.hpp"

#include <cmath>
#include <utility>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"
#include "itermean/kernels.hpp"
#include "itermean/roots.hpp"

namespace itermean {

using detail::fmt_double;

double MonotoneMap::Impl::inverse(double y, const RootOptions& opts) const {
  return solve_increasing([this](double x) { return eval(x); }, y, opts).x;
}

namespace {

class PowerImpl final : public MonotoneMap::Impl {
 public:
  explicit PowerImpl(Monomial m) : m_(m) {}
  double eval(double x) const override { return m_(x); }
  double inverse(double y, const RootOptions&) const override {
    return m_.is_linear() ? y / m_.coef : std::pow(y / m_.coef, 1.0 / m_.power);
  }
  bool has_closed_inverse() const override { return true; }
  std::optional<Monomial> monomial() const override { return m_; }
  std::string label() const override {
    if (m_.coef == 1.0 && m_.power == 1.0) return "x";
    if (m_.is_linear()) return fmt_double(m_.coef) + "*x";
    return fmt_double(m_.coef) + "*x^" + fmt_double(m_.power);
  }

 private:
  Monomial m_;
};

class ExprImpl final : public MonotoneMap::Impl {
 public:
  ExprImpl(FuncExpr e, RootOptions root, std::string label)
      : e_(std::move(e)), root_(root), label_(std::move(label)) {
    if (auto m = e_.as_monomial(); m && m->coef > 0.0 && m->power > 0.0) mono_ = m;
  }
  double eval(double x) const override { return e_.eval(x, root_); }
  double inverse(double y, const RootOptions& opts) const override {
    if (mono_) return PowerImpl(*mono_).inverse(y, opts);
    return Impl::inverse(y, opts);
  }
  bool has_closed_inverse() const override { return mono_.has_value(); }
  std::optional<Monomial> monomial() const override { return mono_; }
  std::string label() const override { return label_; }

 private:
  FuncExpr e_;
  RootOptions root_;
  std::string label_;
  std::optional<Monomial> mono_;
};

class FunctionImpl final : public MonotoneMap::Impl {
 public:
  FunctionImpl(std::string label, std::function<double(double)> fn,
               std::function<double(double)> inv)
      : label_(std::move(label)), fn_(std::move(fn)), inv_(std::move(inv)) {}
  double eval(double x) const override { return fn_(x); }
  double inverse(double y, const RootOptions& opts) const override {
    return inv_ ? inv_(y) : Impl::inverse(y, opts);
  }
  bool has_closed_inverse() const override { return static_cast<bool>(inv_); }
  std::string label() const override { return label_; }

 private:
  std::string label_;
  std::function<double(double)> fn_, inv_;
};

class ComposeImpl final : public MonotoneMap::Impl {
 public:
  ComposeImpl(MonotoneMap outer, MonotoneMap inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {}
  double eval(double x) const override { return outer_.eval_raw(inner_.eval_raw(x)); }
  double inverse(double y, const RootOptions& opts) const override {
    return inner_.inverse_eval(outer_.inverse_eval(y, opts), opts);
  }
  bool has_closed_inverse() const override {
    return outer_.inverse_strategy() == InverseStrategy::ClosedForm &&
           inner_.inverse_strategy() == InverseStrategy::ClosedForm;
  }
  std::string label() const override { return "(" + outer_.label() + ")o(" + inner_.label() + ")"; }

 private:
  MonotoneMap outer_, inner_;
};

class InverseImpl final : public MonotoneMap::Impl {
 public:
  InverseImpl(MonotoneMap base, RootOptions root) : base_(std::move(base)), root_(root) {}
  double eval(double x) const override { return base_.inverse_eval(x, root_); }
  double inverse(double y, const RootOptions&) const override { return base_.eval_raw(y); }
  bool has_closed_inverse() const override { return true; }
  std::string label() const override { return "inv(" + base_.label() + ")"; }

 private:
  MonotoneMap base_;
  RootOptions root_;
};

class IterateImpl final : public MonotoneMap::Impl {
 public:
  IterateImpl(MonotoneMap base, int n, RootOptions root)
      : base_(std::move(base)), n_(n), root_(root) {}
  double eval(double x) const override { return apply(x, n_, root_); }
  double inverse(double y, const RootOptions& opts) const override { return apply(y, -n_, opts); }
  bool has_closed_inverse() const override {
    return n_ < 0 || base_.inverse_strategy() == InverseStrategy::ClosedForm;
  }
  std::string label() const override { return "(" + base_.label() + ")^[" + std::to_string(n_) + "]"; }

 private:
  double apply(double x, int n, const RootOptions& opts) const {
    if (n >= 0) {
      for (int k = 0; k < n; ++k) x = base_.eval_raw(x);
    } else {
      for (int k = 0; k < -n; ++k) x = base_.inverse_eval(x, opts);
    }
    return x;
  }
  MonotoneMap base_;
  int n_;
  RootOptions root_;
};

class SumImpl final : public MonotoneMap::Impl {
 public:
  SumImpl(MonotoneMap a, MonotoneMap b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(double x) const override { return a_.eval_raw(x) + b_.eval_raw(x); }
  std::string label() const override { return "(" + a_.label() + ")+(" + b_.label() + ")"; }

 private:
  MonotoneMap a_, b_;
};

class ShiftImpl final : public MonotoneMap::Impl {
 public:
  ShiftImpl(MonotoneMap base, double c) : base_(std::move(base)), c_(c) {}
  double eval(double x) const override { return base_.eval_raw(x) + c_; }
  double inverse(double y, const RootOptions& opts) const override {
    return base_.inverse_eval(y - c_, opts);
  }
  bool has_closed_inverse() const override {
    return base_.inverse_strategy() == InverseStrategy::ClosedForm;
  }
  std::string label() const override { return "(" + base_.label() + ")+" + fmt_double(c_); }

 private:
  MonotoneMap base_;
  double c_;
};

Monomial compose_monomials(const Monomial& outer, const Monomial& inner) {
  return {outer.coef * std::pow(inner.coef, outer.power), outer.power * inner.power};
}

Monomial invert_monomial(const Monomial& m) {
  const double q = 1.0 / m.power;
  return {m.power == 1.0 ? 1.0 / m.coef : std::pow(m.coef, -q), q};
}

}  // namespace

MonotoneMap::MonotoneMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw std::invalid_argument("MonotoneMap: null implementation");
}

MonotoneMap MonotoneMap::identity() { return power_map(1.0, 1.0); }

MonotoneMap MonotoneMap::power_map(double coef, double power) {
  if (!(coef > 0.0) || !(power > 0.0) || !std::isfinite(coef) || !std::isfinite(power)) {
    throw DomainError("c*x^p is an increasing bijection of (0, inf) only for c > 0, p > 0");
  }
  return MonotoneMap(std::make_shared<PowerImpl>(Monomial{coef, power}));
}

MonotoneMap MonotoneMap::from_expr(const FuncExpr& expr, const RootOptions& root,
                                   std::string label) {
  if (auto missing = expr.unbound(); !missing.empty()) {
    throw DomainError("unbound parameter '" + *missing.begin() + "'");
  }
  if (label.empty()) label = expr.unparse();
  return MonotoneMap(std::make_shared<ExprImpl>(expr, root, std::move(label)));
}

MonotoneMap MonotoneMap::from_function(std::string label, std::function<double(double)> fn,
                                       std::function<double(double)> inverse) {
  return MonotoneMap(
      std::make_shared<FunctionImpl>(std::move(label), std::move(fn), std::move(inverse)));
}

double MonotoneMap::eval(double x) const {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(label() + ": argument " + fmt_double(x) + " outside (0, inf)");
  }
  const double v = impl_->eval(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(label() + ": value " + fmt_double(v) + " at x = " + fmt_double(x) +
                      " outside (0, inf)");
  }
  return v;
}

double MonotoneMap::inverse_eval(double y, const RootOptions& opts) const {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError(label() + ": inverse requested at " + fmt_double(y) + " outside (0, inf)");
  }
  return impl_->inverse(y, opts);
}

MonotoneMap MonotoneMap::inverse(const RootOptions& opts) const {
  if (auto m = monomial()) {
    const Monomial inv = invert_monomial(*m);
    return power_map(inv.coef, inv.power);
  }
  return MonotoneMap(std::make_shared<InverseImpl>(*this, opts));
}

std::optional<double> MonotoneMap::linear_coefficient() const {
  if (auto m = monomial(); m && m->is_linear()) return m->coef;
  return std::nullopt;
}

bool MonotoneMap::is_identity() const {
  auto m = monomial();
  return m && m->coef == 1.0 && m->power == 1.0;
}

MonotoneMap compose(const MonotoneMap& outer, const MonotoneMap& inner) {
  if (outer.is_identity()) return inner;
  if (inner.is_identity()) return outer;
  auto mo = outer.monomial();
  auto mi = inner.monomial();
  if (mo && mi) {
    const Monomial c = compose_monomials(*mo, *mi);
    return MonotoneMap::power_map(c.coef, c.power);
  }
  return MonotoneMap(std::make_shared<ComposeImpl>(outer, inner));
}

MonotoneMap iterate(const MonotoneMap& m, int n, const RootOptions& opts) {
  if (n == 0) return MonotoneMap::identity();
  if (auto mono = m.monomial()) {
    const Monomial step = n > 0 ? *mono : invert_monomial(*mono);
    Monomial acc{1.0, 1.0};
    for (int k = 0; k < std::abs(n); ++k) acc = compose_monomials(step, acc);
    return MonotoneMap::power_map(acc.coef, acc.power);
  }
  if (n == 1) return m;
  if (n == -1) return m.inverse(opts);
  return MonotoneMap(std::make_shared<IterateImpl>(m, n, opts));
}

MonotoneMap pointwise_sum(const MonotoneMap& a, const MonotoneMap& b) {
  auto ma = a.monomial();
  auto mb = b.monomial();
  if (ma && mb && ma->power == mb->power) {
    return MonotoneMap::power_map(ma->coef + mb->coef, ma->power);
  }
  return MonotoneMap(std::make_shared<SumImpl>(a, b));
}

MonotoneMap shifted(const MonotoneMap& m, double c) {
  if (c == 0.0) return m;
  return MonotoneMap(std::make_shared<ShiftImpl>(m, c));
}

const char* to_string(Displacement d) {
  switch (d) {
    case Displacement::Above:
      return "above";
    case Displacement::Below:
      return "below";
    case Displacement::HasInteriorFixpoint:
      return "interior-fixpoint";
  }
  return "interior-fixpoint";
}

DisplacementClass classify_displacement(const MonotoneMap& m, const NumericsConfig& cfg) {
  const auto xs = cfg.validation_grid.points();
  const auto d = kernels::map1d(
      xs, [&](double x) { return m.eval(x) - x; }, cfg.parallel);

  bool all_pos = true, all_neg = true;
  for (double v : d) {
    all_pos = all_pos && v > 0.0;
    all_neg = all_neg && v < 0.0;
  }
  if (all_pos) return {Displacement::Above, std::nullopt};
  if (all_neg) return {Displacement::Below, std::nullopt};

  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) return {Displacement::HasInteriorFixpoint, xs[i]};
    if (i + 1 < d.size() && (d[i] < 0.0) != (d[i + 1] < 0.0) && d[i + 1] != 0.0) {
      // bisection on g(x) - x, which changes sign on [xs[i], xs[i+1]]
      double lo = xs[i], hi = xs[i + 1];
      const bool lo_neg = d[i] < 0.0;
      for (int it = 0; it < cfg.root.max_root_iters; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double v = m.eval(mid) - mid;
        if (v == 0.0) return {Displacement::HasInteriorFixpoint, mid};
        ((v < 0.0) == lo_neg ? lo : hi) = mid;
      }
      return {Displacement::HasInteriorFixpoint, lo + 0.5 * (hi - lo)};
    }
  }
  return {Displacement::HasInteriorFixpoint, xs.front()};
}

}  // namespace itermean
