#include <gtest/gtest.h>

#include <cmath>

#include "itermean/errors.hpp"
#include "itermean/monotone.hpp"
#include "oracles.hpp"

using namespace itermean;

namespace {

MonotoneMap expr_map(const std::string& text, double w = 0.5) {
  auto e = FuncExpr::parse(text);
  if (e.parameters().contains("w")) e = e.bind("w", w);
  if (e.parameters().contains("p")) e = e.bind("p", w);
  return MonotoneMap::from_expr(e, {}, text);
}

MonotoneMap example2_r() { return expr_map("p*x^2/(x+1)", 0.5); }

}  // namespace

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(expr_map("x/w", 0.5)(3.0), 6.0);
  EXPECT_EQ(MonotoneMap::identity()(7.0), 7.0);
  EXPECT_DOUBLE_EQ(example2_r()(2.0), 2.0 / 3.0);
}

TEST(Eval, DomainEdgesAreHardErrors) {
  const auto m = expr_map("x/w");
  EXPECT_THROW((void)m(0.0), DomainError);
  EXPECT_THROW((void)m(-1.0), DomainError);
  EXPECT_THROW((void)expr_map("x-1")(0.5), DomainError);  // leaves (0, inf)
}

TEST(Inverse, Examples) {
  EXPECT_DOUBLE_EQ(expr_map("x/(1-w)", 0.5).inverse_eval(10.0), 5.0);
  EXPECT_EQ(MonotoneMap::identity().inverse_eval(4.0), 4.0);
  const auto r = example2_r();
  const double y = r(3.0);
  EXPECT_DOUBLE_EQ(y, 9.0 / 8.0);
  EXPECT_NEAR(r.inverse_eval(y), 3.0, 1e-10);
}

TEST(Inverse, StrategyFollowsForm) {
  EXPECT_EQ(expr_map("x/w").inverse_strategy(), InverseStrategy::ClosedForm);
  EXPECT_EQ(expr_map("3*x^2").inverse_strategy(), InverseStrategy::ClosedForm);
  EXPECT_EQ(example2_r().inverse_strategy(), InverseStrategy::Bracketed);
  // the inverse of a bracketed map evaluates by root-finding but inverts in closed form
  EXPECT_EQ(example2_r().inverse().inverse_strategy(), InverseStrategy::ClosedForm);
}

TEST(Inverse, AgreesWithBisectionOracle) {
  const auto r = example2_r();
  for (double y : {1e-8, 1e-3, 0.2, 1.0, 7.5, 1e4}) {
    const double want = oracle::g_example2(y);
    EXPECT_NEAR(r.inverse_eval(y), want, 1e-10 * std::max(1.0, want)) << y;
  }
}

TEST(Inverse, RoundTripOnValidationGrid) {
  NumericsConfig cfg;
  for (const auto& m : {example2_r(), expr_map("x+x^3"), expr_map("inv(x^1/3+x)")}) {
    for (double x : cfg.validation_grid.points()) {
      const double y = m(x);
      EXPECT_NEAR(m.inverse_eval(y, cfg.root), x, 10 * cfg.root.inverse_tol * std::max(1.0, x)) << m.label() << " " << x;
    }
  }
}

TEST(Inverse, NotOntoReportsBracketFailure) {
  // x/(x+1) never reaches 2
  const auto m = expr_map("x/(x+1)");
  EXPECT_THROW((void)m.inverse_eval(2.0), BracketError);
}

TEST(Compose, Examples) {
  const auto fg = compose(expr_map("x/w", 0.5), expr_map("x/(1-w)", 0.5));
  EXPECT_EQ(fg.linear_coefficient(), 4.0);
  const auto f = example2_r();
  EXPECT_EQ(compose(f, MonotoneMap::identity()).label(), f.label());
  const auto gh = compose(expr_map("x/(1-w)", 0.25), expr_map("x/w", 0.25));
  EXPECT_NEAR(*gh.linear_coefficient(), 1.0 / 0.1875, 1e-15);
}

TEST(Compose, AssociativeOnSamples) {
  const auto a = example2_r(), b = expr_map("x^1/2+x"), c = expr_map("2*x");
  const auto left = compose(compose(a, b), c), right = compose(a, compose(b, c));
  for (double x : {0.01, 0.5, 1.0, 3.0, 40.0}) EXPECT_NEAR(left(x), right(x), 1e-14 * left(x));
}

TEST(Iterate, Examples) {
  const auto g = expr_map("x/w", 0.5);
  EXPECT_DOUBLE_EQ(*iterate(g, -3).linear_coefficient(), 0.125);
  EXPECT_TRUE(iterate(example2_r(), 0).is_identity());
  EXPECT_DOUBLE_EQ(*iterate(MonotoneMap::linear(2.0), 2).linear_coefficient(), 4.0);
}

TEST(Iterate, GroupLawOnSamples) {
  const auto m = example2_r();
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const auto lhs = iterate(m, a + b), ia = iterate(m, a), ib = iterate(m, b);
      for (double x : {0.3, 1.0, 4.0}) {
        const double want = lhs(x);
        EXPECT_NEAR(ia(ib(x)), want, 1e-9 * std::max(1.0, want)) << a << "," << b << " at " << x;
      }
    }
  }
}

TEST(Iterate, NonlinearForwardMatchesRepeatedEval) {
  const auto r = example2_r();
  EXPECT_DOUBLE_EQ(iterate(r, 3)(5.0), r(r(r(5.0))));
}

TEST(PointwiseSum, CollapsesSamePower) {
  const auto s = pointwise_sum(MonotoneMap::linear(2.0), MonotoneMap::linear(3.0));
  EXPECT_EQ(s.linear_coefficient(), 5.0);
  const auto t = pointwise_sum(MonotoneMap::linear(1.0), example2_r());
  EXPECT_DOUBLE_EQ(t(2.0), 2.0 + 2.0 / 3.0);
  EXPECT_EQ(t.inverse_strategy(), InverseStrategy::Bracketed);
}

TEST(Displacement, Examples) {
  NumericsConfig cfg;
  for (double w : {0.1, 0.5, 0.9}) EXPECT_EQ(classify_displacement(expr_map("x/w", w), cfg).verdict, Displacement::Above);
  EXPECT_EQ(classify_displacement(example2_r(), cfg).verdict, Displacement::Below);
  const auto sq = classify_displacement(expr_map("x^2"), cfg);
  EXPECT_EQ(sq.verdict, Displacement::HasInteriorFixpoint);
  ASSERT_TRUE(sq.witness);
  EXPECT_NEAR(*sq.witness, 1.0, 1e-9);
}

TEST(Displacement, IdentityIsAllFixpoints) {
  const auto d = classify_displacement(MonotoneMap::identity(), NumericsConfig{});
  EXPECT_EQ(d.verdict, Displacement::HasInteriorFixpoint);
  EXPECT_TRUE(d.witness);
}

TEST(Displacement, SerialAndParallelAgree) {
  NumericsConfig a, b;
  b.parallel = false;
  const auto m = expr_map("x^3/4+x/8");
  const auto da = classify_displacement(m, a), db = classify_displacement(m, b);
  EXPECT_EQ(da.verdict, db.verdict);
  EXPECT_EQ(da.witness, db.witness);
}
