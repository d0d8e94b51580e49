#include "itermean/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"
#include "itermean/kernels.hpp"

namespace itermean {

using detail::fmt_double;

namespace {

class SeriesImpl final : public MonotoneMap::Impl {
 public:
  SeriesImpl(MonotoneMap g, NumericsConfig cfg) : g_(std::move(g)), cfg_(std::move(cfg)) {}
  double eval(double x) const override { return sum_inverse_iterates(g_, x, cfg_); }
  std::string label() const override { return "sum_k (" + g_.label() + ")^-k"; }

 private:
  MonotoneMap g_;
  NumericsConfig cfg_;
};

}  // namespace

SeriesValue sum_inverse_iterates_detail(const MonotoneMap& g, double x, const NumericsConfig& cfg) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("series evaluated at " + fmt_double(x) + " outside (0, inf)");
  }
  if (cfg.collapse_linear) {
    if (auto c = g.linear_coefficient()) {
      if (!(*c > 1.0)) {
        throw DivergenceError("g(x) = " + fmt_double(*c) +
                              "*x is not above the diagonal; inverse iterates do not decay");
      }
      return {x / (1.0 - 1.0 / *c), 0, 0.0};
    }
  }

  double sum = x;
  double term = x;
  int streak = 0;
  for (int k = 1; k <= cfg.max_terms; ++k) {
    const double next = g.inverse_eval(term, cfg.root);
    if (next == 0.0) return {sum, k, 0.0};  // underflow: the rest of the series is below any tolerance
    sum += next;
    if (!(sum <= cfg.divergence_cap)) {
      throw DivergenceError("partial sum exceeded " + fmt_double(cfg.divergence_cap) +
                            " at x = " + fmt_double(x) + " after " + std::to_string(k) + " terms");
    }
    const double rho = next / term;
    term = next;
    if (rho >= 1.0) {
      if (++streak >= cfg.divergence_patience) {
        throw DivergenceError("inverse iterates are not decreasing at x = " + fmt_double(x) +
                              " (ratio " + fmt_double(rho) + ")");
      }
      continue;
    }
    streak = 0;
    const double tail = next * rho / (1.0 - rho);
    if (next <= cfg.series_tol * (1.0 + sum) && tail <= cfg.series_tol) return {sum, k, tail};
  }
  throw ConvergenceError("series at x = " + fmt_double(x) + " not certified within " +
                         std::to_string(cfg.max_terms) + " terms (convergence undetermined)");
}

std::vector<double> partial_sums(const MonotoneMap& g, double x, int n, const RootOptions& root) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  double term = x, sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) term = term > 0.0 ? g.inverse_eval(term, root) : 0.0;
    sum += term;
    out.push_back(sum);
  }
  return out;
}

MonotoneMap build_f_from_g(const MonotoneMap& g, const NumericsConfig& cfg) {
  const auto cls = classify_displacement(g, cfg);
  if (cls.verdict != Displacement::Above) {
    std::string why = cls.verdict == Displacement::Below
                          ? "g lies below the diagonal, so its inverse iterates grow"
                          : "g has a fixpoint near " + fmt_double(cls.witness.value_or(0.0)) +
                                ", where every term equals it";
    throw DivergenceError("series of inverse iterates of " + g.label() + " cannot converge: " + why);
  }
  if (cfg.collapse_linear) {
    if (auto c = g.linear_coefficient()) return MonotoneMap::linear(1.0 / (1.0 - 1.0 / *c));
  }
  return MonotoneMap(std::make_shared<SeriesImpl>(g, cfg));
}

double shifted_series(const MonotoneMap& g, double x, const NumericsConfig& cfg) {
  return g.eval(x) + sum_inverse_iterates(g, x, cfg);
}

ResidualReport reflexivity_residual(const MonotoneMap& f, const MonotoneMap& g,
                                    const NumericsConfig& cfg) {
  ResidualReport rep;
  rep.xs = cfg.mean_grid.points();
  rep.residuals = kernels::map1d(
      rep.xs,
      [&](double x) {
        const double fx = f.eval(x);
        const double gx = g.eval(x);
        return std::abs(f.eval(gx) - fx - gx) / (1.0 + std::abs(fx) + std::abs(gx));
      },
      cfg.parallel);
  rep.witness_x = rep.xs.front();
  rep.max_residual = -1.0;
  for (std::size_t i = 0; i < rep.xs.size(); ++i) {
    if (rep.residuals[i] > rep.max_residual) {
      rep.max_residual = rep.residuals[i];
      rep.witness_x = rep.xs[i];
    }
  }
  return rep;
}

SeriesReport series_report(const MonotoneMap& g, std::span<const double> xs,
                           const NumericsConfig& cfg) {
  SeriesReport rep;
  rep.converged = true;
  for (double x : xs) {
    try {
      const auto v = sum_inverse_iterates_detail(g, x, cfg);
      rep.values.emplace_back(x, v.value);
      rep.terms_used = std::max(rep.terms_used, v.terms_used);
      rep.tail_estimate = std::max(rep.tail_estimate, v.tail_estimate);
    } catch (const DivergenceError& e) {
      rep.converged = false;
      rep.divergence_witness = x;
      rep.message = e.what();
      break;
    } catch (const ConvergenceError& e) {
      rep.converged = false;
      rep.message = e.what();
      break;
    }
  }
  return rep;
}

}  // namespace itermean
