#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "itermean/config.hpp"
#include "itermean/expr.hpp"

namespace itermean {

enum class InverseStrategy { ClosedForm, Bracketed };

/// A continuous, strictly increasing bijection of (0, inf) onto itself.
///
/// Values are immutable handles to a shared implementation node, so copies are
/// cheap and concurrent evaluation is safe. Compositions and iterates are kept
/// as lazy chains, except that maps of the form c * x^p collapse to a single
/// closed form.
class MonotoneMap {
 public:
  /// Extension point for new kinds of maps (the series module adds one).
  class Impl {
   public:
    virtual ~Impl() = default;
    /// Raw value; may underflow to 0 for tiny x. Callers validate.
    virtual double eval(double x) const = 0;
    /// Closed-form inverse when available; the default root-finds on eval.
    virtual double inverse(double y, const RootOptions& opts) const;
    virtual bool has_closed_inverse() const { return false; }
    virtual std::optional<Monomial> monomial() const { return std::nullopt; }
    virtual std::string label() const = 0;
  };

  explicit MonotoneMap(std::shared_ptr<const Impl> impl);

  static MonotoneMap identity();
  static MonotoneMap power_map(double coef, double power);
  static MonotoneMap linear(double coef) { return power_map(coef, 1.0); }
  /// Wraps a bound expression; c * x^p forms get a closed-form inverse.
  static MonotoneMap from_expr(const FuncExpr& expr, const RootOptions& root = {},
                               std::string label = {});
  /// Wraps a callable, optionally with its exact inverse.
  static MonotoneMap from_function(std::string label, std::function<double(double)> fn,
                                   std::function<double(double)> inverse = {});

  /// Finite positive value at x > 0, else DomainError.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
  /// Value without the positivity check on the result (underflow allowed).
  double eval_raw(double x) const { return impl_->eval(x); }

  /// x with eval(x) = y, to opts.inverse_tol when found numerically.
  double inverse_eval(double y, const RootOptions& opts = {}) const;

  /// The inverse as a map in its own right; root-finding uses `opts`.
  MonotoneMap inverse(const RootOptions& opts = {}) const;

  InverseStrategy inverse_strategy() const {
    return impl_->has_closed_inverse() ? InverseStrategy::ClosedForm : InverseStrategy::Bracketed;
  }
  std::optional<Monomial> monomial() const { return impl_->monomial(); }
  /// Coefficient c when the map is exactly x -> c * x.
  std::optional<double> linear_coefficient() const;
  bool is_identity() const;

  std::string label() const { return impl_->label(); }
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// outer(inner(x)); the inverse applies inner^-1 after outer^-1.
MonotoneMap compose(const MonotoneMap& outer, const MonotoneMap& inner);

/// n-fold self-composition; negative n iterates the inverse, 0 is the identity.
MonotoneMap iterate(const MonotoneMap& m, int n, const RootOptions& opts = {});

/// x -> a(x) + b(x).
MonotoneMap pointwise_sum(const MonotoneMap& a, const MonotoneMap& b);

/// x -> m(x) + c. Not onto (0, inf) unless c = 0; evaluation fails where the
/// value leaves (0, inf).
MonotoneMap shifted(const MonotoneMap& m, double c);

enum class Displacement { Above, Below, HasInteriorFixpoint };
const char* to_string(Displacement d);

struct DisplacementClass {
  Displacement verdict = Displacement::HasInteriorFixpoint;
  std::optional<double> witness;  // g(witness) ~ witness
};

/// Lemma-1 trichotomy on cfg.validation_grid: g(x) > x everywhere, 0 < g(x) < x
/// everywhere, or a bracketed root of g(x) - x.
DisplacementClass classify_displacement(const MonotoneMap& m, const NumericsConfig& cfg);

}  // namespace itermean
