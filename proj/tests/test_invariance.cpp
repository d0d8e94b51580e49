#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "itermean/errors.hpp"
#include "itermean/invariance.hpp"
#include "itermean/series.hpp"

using namespace itermean;

namespace {

MonotoneMap h_linear(double w) {
  return MonotoneMap::from_expr(FuncExpr::parse("x/w").bind("w", w), {}, "h");
}

}  // namespace

TEST(Bisymmetry, BuiltinsAreCertified) {
  NumericsConfig cfg;
  EXPECT_EQ(check_bisymmetry(GroupoidOp::addition(), cfg).bisymmetry, Bisymmetry::Certified);
  EXPECT_EQ(check_bisymmetry(GroupoidOp::multiplication(), cfg).bisymmetry, Bisymmetry::Certified);
}

TEST(Bisymmetry, AffineOperationIsMedial) {
  // (u+2v) + 2(w+2z) = u + 2v + 2w + 4z is symmetric in v and w
  const auto op = check_bisymmetry(GroupoidOp::custom("u+2v", [](double u, double v) { return u + 2 * v; }),
                                   NumericsConfig{});
  EXPECT_EQ(op.bisymmetry, Bisymmetry::Certified);
  EXPECT_FALSE(op.witness);
}

TEST(Bisymmetry, NonlinearOperationIsRefutedWithWitness) {
  const auto fn = [](double u, double v) { return u * u + v; };
  const auto op = check_bisymmetry(GroupoidOp::custom("u^2+v", fn), NumericsConfig{});
  ASSERT_EQ(op.bisymmetry, Bisymmetry::Refuted);
  ASSERT_TRUE(op.witness);
  const auto [u, v, w, z] = *op.witness;
  EXPECT_NE(fn(fn(u, v), fn(w, z)), fn(fn(u, w), fn(v, z)));
}

TEST(BuildTriple, RefusesRefutedOperation) {
  const auto h = h_linear(0.3);
  const auto op = GroupoidOp::custom("u^2+v", [](double u, double v) { return u * u + v; });
  EXPECT_THROW((void)build_triple(h, h, h, op, NumericsConfig{}), std::invalid_argument);
}

TEST(Theorem3, LinearConstruction) {
  NumericsConfig cfg;
  const auto [g, f] = theorem3_construct(h_linear(0.25), cfg);
  EXPECT_NEAR(*g.linear_coefficient(), 1.0 / 0.75, 1e-15);
  EXPECT_NEAR(*f.linear_coefficient(), 4.0, 1e-14);
  EXPECT_THROW((void)theorem3_construct(MonotoneMap::linear(0.5), cfg), DivergenceError);
}

TEST(Invariance, ExampleThreeLinearTriple) {
  NumericsConfig cfg;
  const auto h = h_linear(0.3);
  const auto [g, f] = theorem3_construct(h, cfg);
  const auto t = build_triple(f, g, h, GroupoidOp::addition(), cfg);
  EXPECT_LE(t.hypothesis_fg, 1e-14);
  EXPECT_LE(t.hypothesis_gh, 1e-14);
  const auto rep = invariance_residual(t, cfg);
  EXPECT_TRUE(rep.hypotheses_met);
  EXPECT_LE(rep.max_residual, 1e-12);
  // closed forms: D_fg = (1-w)x + wy, D_gh = wx + (1-w)y
  EXPECT_NEAR(t.D_fg(1.0, 2.0), 0.7 + 0.6, 1e-14);
  EXPECT_NEAR(t.D_gh(1.0, 2.0), 0.3 + 1.4, 1e-14);
}

TEST(Invariance, UnrelatedMapsDoNotMeetHypotheses) {
  NumericsConfig cfg;
  const auto f = MonotoneMap::power_map(1.0, 2.0), g = MonotoneMap::linear(3.0), h = MonotoneMap::linear(2.0);
  const auto t = build_triple(f, g, h, GroupoidOp::addition(), cfg);
  EXPECT_GT(t.hypothesis_fg, cfg.hypothesis_tol);
  EXPECT_FALSE(invariance_residual(t, cfg).hypotheses_met);
}

TEST(Gauss, ExampleThreeConvergesToAverage) {
  NumericsConfig cfg;
  const double w = 0.3;
  const auto h = h_linear(w);
  const auto [g, f] = theorem3_construct(h, cfg);
  const auto t = build_triple(f, g, h, GroupoidOp::addition(), cfg);
  const auto trace = gauss_iterate(t.D_fg, t.D_gh, 1.0, 9.0, cfg);
  ASSERT_TRUE(trace.converged) << trace.message;
  // the invariant mean D_fggh(x, y) = A here, so the limit is 5
  EXPECT_NEAR(trace.limit, 5.0, 1e-10);
  EXPECT_LE(trace.iterations, 100);
  EXPECT_EQ(trace.iterates.front(), std::make_pair(1.0, 9.0));
  EXPECT_EQ(trace.iterates.size(), static_cast<std::size_t>(trace.iterations) + 1);
}

TEST(Gauss, DiagonalStartIsFixed) {
  const auto A = arithmetic_mean();
  const auto trace = gauss_iterate(A, A, 3.0, 3.0, NumericsConfig{});
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.iterations, 0);
  EXPECT_EQ(trace.limit, 3.0);
}

TEST(Gauss, ArithmeticPairCollapsesInOneStep) {
  const auto A = arithmetic_mean();
  const auto trace = gauss_iterate(A, A, 2.0, 10.0, NumericsConfig{});
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.iterations, 1);
  EXPECT_EQ(trace.limit, 6.0);
}

TEST(Gauss, IterationCapIsReported) {
  NumericsConfig cfg;
  cfg.gauss_max_iters = 3;
  const auto lo = MeanObject([](double x, double y) { return 0.9 * std::min(x, y) + 0.1 * std::max(x, y); },
                             Provenance::Custom, "lo");
  const auto hi = MeanObject([](double x, double y) { return 0.9 * std::max(x, y) + 0.1 * std::min(x, y); },
                             Provenance::Custom, "hi");
  const auto trace = gauss_iterate(lo, hi, 1.0, 100.0, cfg);
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(trace.iterations, 3);
  EXPECT_FALSE(trace.message.empty());
}

TEST(Eq11, LinearResidualMatchesClosedForm) {
  NumericsConfig cfg;
  const std::vector<double> xs{1.0};
  const auto rep = eq11_residual(h_linear(0.5), xs, cfg);
  ASSERT_EQ(rep.points.size(), 1u);
  ASSERT_TRUE(rep.points[0].ok) << rep.points[0].error;
  EXPECT_NEAR(rep.points[0].lhs, 4.0, 1e-12);
  EXPECT_NEAR(rep.points[0].rhs, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.points[0].residual, 8.0 / 3.0, 1e-12);
}

TEST(Eq11, SweepFollowsFormula) {
  NumericsConfig cfg;
  const std::vector<double> xs{0.5, 2.0, 7.0};
  for (double w : {0.1, 0.25, 0.4, 0.6, 0.9}) {
    const auto rep = eq11_residual(h_linear(w), xs, cfg);
    EXPECT_EQ(rep.failed_points, 0u);
    for (const auto& p : rep.points) {
      const double lhs = p.x / (w * (1 - w)), rhs = p.x / (1 - w * (1 - w));
      EXPECT_NEAR(p.lhs, lhs, 1e-12 * lhs) << w;
      EXPECT_NEAR(p.rhs, rhs, 1e-12 * rhs) << w;
      EXPECT_GT(p.residual, 0.0);
    }
  }
}

TEST(Eq11, BelowDiagonalHFailsPerPoint) {
  const std::vector<double> xs{1.0, 2.0};
  const auto rep = eq11_residual(MonotoneMap::linear(0.5), xs, NumericsConfig{});
  EXPECT_EQ(rep.failed_points, 2u);
  for (const auto& p : rep.points) {
    EXPECT_FALSE(p.ok);
    EXPECT_FALSE(p.error.empty());
  }
}

TEST(Remark7, ViolationExamples) {
  EXPECT_EQ(remark7_violation(2.0, 2.0, 2.0), 16.0 - 8.0);
  EXPECT_EQ(remark7_violation(1.0, 1.0, 1.0), 1.0);
}

TEST(Remark7, SystemIsInfeasible) {
  const auto rep = remark7_check(NumericsConfig{});
  EXPECT_FALSE(rep.feasible);
  EXPECT_TRUE(rep.algebra_infeasible);
  EXPECT_FALSE(rep.elimination_trace.empty());
  EXPECT_EQ(rep.points_per_axis, 181u);
  EXPECT_NEAR(rep.grid_min_violation, 0.74, 1e-9);
  EXPECT_GT(rep.grid_min_violation, 0.1);
}

TEST(Remark7, SerialAndParallelScansAgree) {
  NumericsConfig a, b;
  b.parallel = false;
  const auto ra = remark7_check(a), rb = remark7_check(b);
  EXPECT_EQ(ra.grid_min_violation, rb.grid_min_violation);
  EXPECT_EQ(ra.grid_argmin, rb.grid_argmin);
}
