#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itermean/config.hpp"
#include "itermean/means.hpp"
#include "itermean/monotone.hpp"

namespace itermean {

/// Samples quadruples from the mean grid and certifies or refutes
/// (u.v).(w.z) = (u.w).(v.z). Addition and multiplication certify directly.
GroupoidOp check_bisymmetry(GroupoidOp op, const NumericsConfig& cfg);

/// D_{f,g}, D_{g,h} and D_{fog,goh} over one operation, with the residuals of
/// the hypotheses f(x).g(x) = (fog)(x) and g(x).h(x) = (goh)(x).
struct CompositeTriple {
  MonotoneMap f, g, h;
  GroupoidOp op;
  MeanObject D_fg, D_gh, D_fggh;
  double hypothesis_fg = 0.0;
  double hypothesis_gh = 0.0;
};

/// Throws std::invalid_argument when op is refuted as bisymmetric.
CompositeTriple build_triple(const MonotoneMap& f, const MonotoneMap& g, const MonotoneMap& h,
                             GroupoidOp op, const NumericsConfig& cfg);

struct InvarianceReport {
  double max_residual = 0.0;
  double witness_x = 0.0, witness_y = 0.0;
  bool hypotheses_met = false;  // false: the residual does not verify anything
  double hypothesis_fg = 0.0, hypothesis_gh = 0.0;
};

/// max over the grid of |D_fggh(D_fg, D_gh) - D_fggh| / (1 + |D_fggh|).
InvarianceReport invariance_residual(const CompositeTriple& t, const NumericsConfig& cfg);

struct GaussTrace {
  std::vector<std::pair<double, double>> iterates;  // starts with (x0, y0)
  bool converged = false;
  double limit = 0.0;
  int iterations = 0;
  std::string message;
};

/// (x, y) <- (M1(x, y), M2(x, y)) until |x - y| <= cfg.gauss_tol (or the
/// floating-point floor 4 eps max(|x|, |y|)), or cfg.gauss_max_iters.
GaussTrace gauss_iterate(const MeanObject& m1, const MeanObject& m2, double x0, double y0,
                         const NumericsConfig& cfg);

struct NestedMaps {
  MonotoneMap g;  // sum_i h^-i
  MonotoneMap f;  // sum_j g^-j
};

/// Builds g = sum_i h^-i with a tenfold tighter series tolerance, then
/// f = sum_j g^-j. Throws DivergenceError if h is not above the diagonal.
NestedMaps theorem3_construct(const MonotoneMap& h, const NumericsConfig& cfg);

struct Eq11Point {
  double x = 0.0;
  bool ok = false;
  double lhs = 0.0, rhs = 0.0, residual = 0.0;
  int inner_terms = 0;  // sum_i h^-i at x
  int lhs_terms = 0;    // sum_j G^-j at x
  int rhs_terms = 0;    // sum_k (G o h)^-k at x
  std::string error;
};

/// Residual landscape of
///   sum_j (sum_i h^-i)^(-j+1) = sum_k (sum_i h^(-i+1))^-k
/// evaluated as (sum_j G^-j)(G(x)) against sum_k (G o h)^-k(x), G = sum_i h^-i.
struct Eq11Report {
  std::string h_label;
  std::vector<Eq11Point> points;
  double max_residual = 0.0;
  std::size_t failed_points = 0;
  double series_tol = 0.0;
};

Eq11Report eq11_residual(const MonotoneMap& h, std::span<const double> xs, const NumericsConfig& cfg);

/// max(|ab - a - b|, |bc - b - c|, |ab^2c - ab - bc|).
double remark7_violation(double a, double b, double c);

struct Remark7Report {
  bool feasible = true;
  bool algebra_infeasible = false;
  std::vector<std::string> elimination_trace;
  double grid_min_violation = 0.0;
  std::array<double, 3> grid_argmin{};
  std::size_t points_per_axis = 0;
  double step = 0.0;
};

/// Algebraic elimination of ab = a + b, bc = b + c, ab^2c = ab + bc under
/// a, b, c >= 1, backed by a lattice scan of the violation over [lo, hi]^3.
Remark7Report remark7_check(const NumericsConfig& cfg);

/// The scan lattice lo, lo + step, ..., hi.
std::vector<double> remark7_axis(const NumericsConfig& cfg);

}  // namespace itermean
