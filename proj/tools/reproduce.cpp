#include "reproduce.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "itermean/errors.hpp"
#include "itermean/expr.hpp"
#include "itermean/format.hpp"
#include "itermean/invariance.hpp"
#include "itermean/kernels.hpp"
#include "itermean/means.hpp"
#include "itermean/series.hpp"

namespace itermean::cli {

using detail::fmt_double;

namespace {

// pinned acceptance tolerances
constexpr double kClosedFormTol = 1e-9;
constexpr double kInvarianceLinearTol = 1e-10;
constexpr double kGaussLimitTol = 1e-10;
constexpr int kGaussMaxIters = 100;
constexpr double kGwqamTol = 1e-9;
constexpr double kOracleTol = 1e-10;
constexpr double kNonlinearReflexiveTol = 1e-7;
constexpr int kOracleTerms = 200;
constexpr double kRemark7Margin = 0.1;

struct GridMax {
  double value = 0.0;
  double x = 0.0, y = 0.0;
};

GridMax grid_max_2d(const NumericsConfig& cfg, const std::function<double(double, double)>& err) {
  const auto xs = cfg.mean_grid.points();
  const auto v = kernels::map2d(xs, xs, err, cfg.parallel);
  GridMax out{-1.0, 0.0, 0.0};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] <= out.value)) out = {v[k], xs[k / xs.size()], xs[k % xs.size()]};
  }
  return out;
}

GridMax grid_max_1d(const NumericsConfig& cfg, const std::function<double(double)>& err) {
  const auto xs = cfg.mean_grid.points();
  const auto v = kernels::map1d(xs, err, cfg.parallel);
  GridMax out{-1.0, 0.0, 0.0};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] <= out.value)) out = {v[k], xs[k], 0.0};
  }
  return out;
}

MonotoneMap map_of(const std::string& text, const std::map<std::string, double>& params,
                   const NumericsConfig& cfg) {
  return MonotoneMap::from_expr(FuncExpr::parse(text).bind(params), cfg.root, text);
}

Comparison at_most(std::string label, std::string quantity, double value, double tol,
                   std::string rerun = {}) {
  return {std::move(label), std::move(quantity), value, "<=", tol, value <= tol, std::move(rerun)};
}

Comparison above(std::string label, std::string quantity, double value, double threshold,
                 std::string rerun = {}) {
  return {std::move(label), std::move(quantity), value, ">", threshold, value > threshold, std::move(rerun)};
}

// reflexive, internal, strict and increasing; symmetry is not a mean axiom
int axioms_failed(const MeanCheckReport& r) {
  return static_cast<int>(r.partial) + !r.reflexive.pass + !r.internal.pass + !r.strict.pass + !r.increasing.pass;
}

std::string at(double x, double y) { return " --at " + fmt_double(x) + "," + fmt_double(y); }

std::vector<double> weights() {
  std::vector<double> ws;
  for (int i = 1; i <= 9; ++i) ws.push_back(i / 10.0);
  return ws;
}

Reproduction example1(const NumericsConfig& cfg) {
  Reproduction rep{"example1", true, {}, Json::object(), Json::object()};
  Json cases = Json::array();
  for (double w : weights()) {
    const std::string label = "w=" + fmt_double(w);
    const std::string cmd = "itermean check-mean --r 'w*x' --param " + label;
    const MeanObject D = make_iterative_mean_from_r(map_of("w*x", {{"w", w}}, cfg), cfg);
    const auto err = grid_max_2d(cfg, [&](double x, double y) { return std::abs(D(x, y) - (w * x + (1 - w) * y)); });
    const auto checks = check_mean(D, cfg);
    rep.comparisons.push_back(at_most(label, "max |D_r - (w*x + (1-w)*y)|", err.value, kClosedFormTol, cmd + at(err.x, err.y)));
    rep.comparisons.push_back(at_most(label, "mean axioms failed", axioms_failed(checks), 0, cmd));
    cases.push_back({{"w", w}, {"max_error", err.value}, {"witness", {err.x, err.y}}, {"checks", to_json(checks)}});
  }
  rep.body["cases"] = cases;
  return rep;
}

Reproduction example2(const NumericsConfig& cfg) {
  Reproduction rep{"example2", true, {}, Json::object(), Json::object()};
  const double p = 0.5;
  const std::string cmd = "itermean check-mean --r 'p*x^2/(x+1)' --param p=0.5";
  const MonotoneMap r = map_of("p*x^2/(x+1)", {{"p", p}}, cfg);
  const MonotoneMap g = r.inverse(cfg.root);
  const auto xs = cfg.mean_grid.points();

  const auto series = series_report(g, xs, cfg);
  rep.body["series"] = to_json(series);
  rep.comparisons.push_back(above("p=0.5", "series of inverse iterates converged on grid", series.converged, 0.5));
  if (!series.converged) return rep;

  const MonotoneMap f = build_f_from_g(g, cfg);
  // forward iteration of r, no root-finding: an independent route to the same sum
  auto brute = [&](double x) {
    double term = x, sum = x;
    for (int k = 1; k < kOracleTerms; ++k) {
      term = p * term * term / (term + 1.0);
      sum += term;
    }
    return sum;
  };
  const auto oracle = grid_max_1d(cfg, [&](double x) { return std::abs(f(x) - brute(x)) / brute(x); });
  rep.comparisons.push_back(at_most("p=0.5", "max relative |f - 200-term forward sum|", oracle.value, kOracleTol));

  const auto refl = reflexivity_residual(f, g, cfg);
  rep.comparisons.push_back(at_most("p=0.5", "reflexivity residual of f", refl.max_residual, kNonlinearReflexiveTol));

  const MeanObject D = make_iterative_mean_from_r(r, cfg);
  const auto checks = check_mean(D, cfg);
  rep.comparisons.push_back(at_most("p=0.5", "mean axioms failed", axioms_failed(checks), 0, cmd));
  rep.body["reflexivity"] = {{"max_residual", refl.max_residual}, {"witness_x", refl.witness_x}};
  rep.body["checks"] = to_json(checks);
  return rep;
}

Reproduction example3(const NumericsConfig& cfg) {
  Reproduction rep{"example3", true, {}, Json::object(), Json::object()};
  Json cases = Json::array();
  for (double w : weights()) {
    const std::string label = "w=" + fmt_double(w);
    const std::string comp = "itermean check-mean --f 'x/w' --g 'x/(1-w)' --h 'x/w' --composite --param " + label;
    const MonotoneMap h = map_of("x/w", {{"w", w}}, cfg);
    const auto [g, f] = theorem3_construct(h, cfg);

    const auto eg = grid_max_1d(cfg, [&](double x) { return std::abs(g(x) - x / (1 - w)); });
    const auto ef = grid_max_1d(cfg, [&](double x) { return std::abs(f(x) - x / w); });
    const MeanObject Dh = make_iterative_mean(h, cfg);
    const MeanObject Dg = make_iterative_mean(g, cfg);
    const auto edh = grid_max_2d(cfg, [&](double x, double y) { return std::abs(Dh(x, y) - (w * x + (1 - w) * y)); });
    const auto edg = grid_max_2d(cfg, [&](double x, double y) { return std::abs(Dg(x, y) - ((1 - w) * x + w * y)); });

    const CompositeTriple t = build_triple(f, g, h, GroupoidOp::addition(), cfg);
    const auto ec = grid_max_2d(cfg, [&](double x, double y) { return std::abs(t.D_fggh(x, y) - w * (1 - w) * (x + y)); });
    const auto checks = check_mean(t.D_fggh, cfg);
    const auto inv = invariance_residual(t, cfg);
    const double internal_violation = checks.internal.witness ? checks.internal.witness->violation : 0.0;
    const std::string witness_cmd =
        checks.internal.witness ? comp + at(checks.internal.witness->x, checks.internal.witness->y) : comp;

    rep.comparisons.push_back(at_most(label, "max |g - x/(1-w)|", eg.value, kClosedFormTol));
    rep.comparisons.push_back(at_most(label, "max |f - x/w|", ef.value, kClosedFormTol));
    rep.comparisons.push_back(at_most(label, "max |D_h - (w*x + (1-w)*y)|", edh.value, kClosedFormTol));
    rep.comparisons.push_back(at_most(label, "max |D_g - ((1-w)*x + w*y)|", edg.value, kClosedFormTol));
    rep.comparisons.push_back(at_most(label, "max |D_{fog,goh} - w(1-w)(x+y)|", ec.value, kClosedFormTol));
    rep.comparisons.push_back(above(label, "internality violation of D_{fog,goh}", internal_violation, 0.0, witness_cmd));
    rep.comparisons.push_back(at_most(label, "invariance residual", inv.max_residual, kInvarianceLinearTol));
    cases.push_back({{"w", w},
                     {"g_error", eg.value},
                     {"f_error", ef.value},
                     {"D_h_error", edh.value},
                     {"D_g_error", edg.value},
                     {"composite_error", ec.value},
                     {"composite_checks", to_json(checks)},
                     {"invariance", to_json(inv)}});
  }
  rep.body["cases"] = cases;

  // Gauss iteration of (D_g, D_h) at w = 0.3 and the invariant GWQAM
  const double w = 0.3;
  NumericsConfig gcfg = cfg;
  gcfg.gauss_max_iters = kGaussMaxIters;
  const MonotoneMap h = map_of("x/w", {{"w", w}}, cfg);
  const MonotoneMap g = build_f_from_g(h, cfg);
  const MeanObject Dg = make_iterative_mean(g, cfg);
  const MeanObject Dh = make_iterative_mean(h, cfg);
  const GaussTrace tr = gauss_iterate(Dg, Dh, 1.0, 9.0, gcfg);
  const std::string gcmd = "itermean gauss --g 'x/(1-w)' --h 'x/w' --param w=0.3 --start 1,9";
  rep.comparisons.push_back(at_most("w=0.3", "|gauss limit from (1,9) - 5|",
                                    tr.converged ? std::abs(tr.limit - 5.0) : INFINITY, kGaussLimitTol, gcmd));

  const MonotoneMap phi = MonotoneMap::linear(1 - w), psi = MonotoneMap::linear(w), gamma = MonotoneMap::linear(1 - w);
  const MeanObject M = make_gwqam(pointwise_sum(phi, psi), pointwise_sum(psi, gamma), cfg);
  const auto egw = grid_max_2d(cfg, [&](double x, double y) {
    const GaussTrace t = gauss_iterate(Dg, Dh, x, y, gcfg);
    return t.converged ? std::abs(t.limit - M(x, y)) : INFINITY;
  });
  rep.comparisons.push_back(at_most("w=0.3", "max |gauss limit - M_{phi+psi,psi+gamma}|", egw.value, kGwqamTol,
                                    "itermean gauss --g 'x/(1-w)' --h 'x/w' --param w=0.3 --start " +
                                        fmt_double(egw.x) + "," + fmt_double(egw.y)));
  rep.body["gauss"] = to_json(tr);
  rep.body["gwqam"] = {{"phi", "(1-w)*x"}, {"psi", "w*x"}, {"gamma", "(1-w)*x"}, {"max_error", egw.value}};
  return rep;
}

Reproduction remark7(const NumericsConfig& cfg) {
  Reproduction rep{"remark7", true, {}, Json::object(), Json::object()};
  const auto r = remark7_check(cfg);
  rep.comparisons.push_back(at_most("", "feasible", r.feasible, 0));
  rep.comparisons.push_back(above("", "algebraic elimination infeasible", r.algebra_infeasible, 0.5));
  rep.comparisons.push_back(above("", "grid minimum violation over [1,10]^3", r.grid_min_violation, kRemark7Margin));
  rep.body["remark7"] = to_json(r);
  return rep;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"example1", "example2", "example3", "remark7"};
  return names;
}

Reproduction reproduce(const std::string& name, bool parallel) {
  NumericsConfig cfg;
  cfg.parallel = parallel;
  Reproduction rep;
  if (name == "example1") {
    rep = example1(cfg);
  } else if (name == "example2") {
    rep = example2(cfg);
  } else if (name == "example3") {
    rep = example3(cfg);
  } else if (name == "remark7") {
    rep = remark7(cfg);
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  rep.pass = true;
  for (const auto& c : rep.comparisons) rep.pass = rep.pass && c.pass;
  rep.config = to_json(cfg);
  return rep;
}

Json to_json(const Reproduction& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = r.name;
  j["config"] = r.config;
  j["pass"] = r.pass;
  Json cs = Json::array();
  for (const auto& c : r.comparisons) {
    Json q;
    q["label"] = c.label;
    q["quantity"] = c.quantity;
    q["value"] = std::isfinite(c.value) ? Json(c.value) : Json("inf");
    q["relation"] = c.relation;
    q["tolerance"] = c.tolerance;
    q["pass"] = c.pass;
    if (!c.rerun.empty()) q["rerun"] = c.rerun;
    cs.push_back(std::move(q));
  }
  j["comparisons"] = cs;
  for (const auto& [k, v] : r.body.items()) j[k] = v;
  return j;
}

}  // namespace itermean::cli
