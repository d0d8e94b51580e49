#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "itermean/errors.hpp"
#include "itermean/expr.hpp"
#include "itermean/format.hpp"
#include "itermean/invariance.hpp"
#include "itermean/means.hpp"
#include "itermean/report_json.hpp"
#include "itermean/series.hpp"
#include "reproduce.hpp"

namespace itermean::cli {

namespace {

using detail::fmt_double;
using Params = std::map<std::string, double>;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  // shared
  std::vector<std::string> params;
  std::string grid;
  std::optional<double> tol_series, tol_inverse, tol_gauss;
  std::optional<int> max_terms;
  std::string format = "json";
  std::string out_path;
  bool serial = false;

  // function specs
  std::string f, g, h, r;
  std::string op = "add";

  // check-mean
  std::string mean;
  bool composite = false;
  bool require_symmetric = false;
  bool require_strict = false;
  std::string at;

  // gauss
  std::string m1, m2, start;

  // residual-eq11
  std::string sweep;
  std::vector<std::string> xs;

  // reproduce
  std::string scenario;
};

struct Output {
  Json json;
  std::string csv;
  std::string human;
  int code = kExitPass;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (s.empty() || ec != std::errc() || p != e || !std::isfinite(v)) {
    throw UsageError(what + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::pair<double, double> parse_point(const std::string& s, const std::string& what) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError(what + " expects x,y");
  const double x = parse_number(parts[0], what);
  const double y = parse_number(parts[1], what);
  if (!(x > 0.0 && y > 0.0)) throw UsageError(what + " needs positive coordinates");
  return {x, y};
}

Params parse_params(const std::vector<std::string>& items) {
  Params out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "--param " + item.substr(0, eq));
  }
  return out;
}

LogGrid parse_grid(std::string s) {
  for (const char* suffix : {"(log)", ":log"}) {
    const std::string suf = suffix;
    if (s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0) {
      s.resize(s.size() - suf.size());
    }
  }
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("--grid expects lo:hi:n");
  LogGrid g;
  g.lo = parse_number(parts[0], "--grid lo");
  g.hi = parse_number(parts[1], "--grid hi");
  const double n = parse_number(parts[2], "--grid n");
  if (!(g.lo > 0.0) || !(g.hi >= g.lo) || !(n >= 1.0) || n != std::floor(n)) {
    throw UsageError("--grid needs 0 < lo <= hi and a positive integer n");
  }
  g.n = static_cast<std::size_t>(n);
  return g;
}

NumericsConfig make_config(const Options& o) {
  NumericsConfig cfg;
  cfg.parallel = !o.serial;
  if (!o.grid.empty()) cfg.mean_grid = parse_grid(o.grid);
  auto positive = [](std::optional<double> v, const char* flag) {
    if (v && !(*v > 0.0)) throw UsageError(std::string(flag) + " must be positive");
    return v;
  };
  if (auto v = positive(o.tol_series, "--tol-series")) cfg.series_tol = *v;
  if (auto v = positive(o.tol_inverse, "--tol-inverse")) cfg.root.inverse_tol = *v;
  if (auto v = positive(o.tol_gauss, "--tol-gauss")) cfg.gauss_tol = *v;
  if (o.max_terms) {
    if (*o.max_terms < 1) throw UsageError("--max-terms must be at least 1");
    cfg.max_terms = *o.max_terms;
  }
  return cfg;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

MonotoneMap load_map(const std::string& flag, const std::string& text, const Params& params,
                     const NumericsConfig& cfg, Json& validations) {
  std::set<std::string> known;
  for (const auto& [k, v] : params) known.insert(k);
  FuncExpr e;
  try {
    e = FuncExpr::parse(text, &known);
  } catch (const ParseError& ex) {
    throw UsageError(flag + " " + quote(text) + ": " + ex.what());
  }
  for (const auto& name : e.parameters()) e = e.bind(name, params.at(name));

  ValidationReport v;
  try {
    v = validate_bijection(e, cfg);
  } catch (const Error& ex) {
    throw UsageError(flag + " " + quote(text) + " cannot be evaluated on (0, inf): " + ex.what());
  }
  validations[flag] = to_json(v);
  if (v.monotone == Verdict::No) {
    std::string why = flag + " " + quote(text) + " is not strictly increasing";
    if (v.failure_witness) {
      why += ": f(" + fmt_double(v.failure_witness->first) + ") >= f(" + fmt_double(v.failure_witness->second) + ")";
    }
    throw UsageError(why);
  }
  if (v.surjective == Verdict::No) {
    throw UsageError(flag + " " + quote(text) + " does not map (0, inf) onto (0, inf) (log-log slopes " +
                     fmt_double(v.slope_near_zero) + ", " + fmt_double(v.slope_near_infinity) + ")");
  }
  return MonotoneMap::from_expr(e, cfg.root, text);
}

std::string config_header(const NumericsConfig& cfg) { return "# config " + to_json(cfg).dump() + "\n"; }

std::string pass_word(bool pass) { return pass ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------- check-mean

std::string check_mean_prefix(const Options& o) {
  std::string cmd = "itermean check-mean";
  if (!o.mean.empty()) cmd += " --mean " + o.mean;
  for (const auto& [flag, text] : {std::pair{"--f", &o.f}, {"--g", &o.g}, {"--h", &o.h}, {"--r", &o.r}}) {
    if (!text->empty()) cmd += std::string(" ") + flag + " " + quote(*text);
  }
  if (o.composite) cmd += " --composite";
  if (o.op != "add") cmd += " --op " + o.op;
  for (const auto& p : o.params) cmd += " --param " + p;
  return cmd;
}

Output cmd_check_mean(const Options& o, const NumericsConfig& cfg) {
  const Params params = parse_params(o.params);
  const GroupoidOp op = o.op == "mul" ? GroupoidOp::multiplication() : GroupoidOp::addition();
  Json validations = Json::object();
  auto need = [&](const char* flag, const std::string& text) {
    if (text.empty()) throw UsageError(std::string("check-mean: ") + flag + " is required here");
    return load_map(flag, text, params, cfg, validations);
  };
  auto forbid = [](std::initializer_list<std::pair<const char*, const std::string*>> flags, const char* mode) {
    for (const auto& [flag, text] : flags) {
      if (!text->empty()) throw UsageError(std::string("check-mean: ") + flag + " cannot be used with " + mode);
    }
  };

  Output res;
  res.json["schema_version"] = kSchemaVersion;
  res.json["command"] = "check-mean";
  res.json["config"] = to_json(cfg);
  res.human = "# itermean check-mean\n" + config_header(cfg);

  std::optional<MeanObject> mean;
  std::optional<CompositeTriple> triple;
  try {
    if (!o.mean.empty()) {
      forbid({{"--f", &o.f}, {"--g", &o.g}, {"--h", &o.h}, {"--r", &o.r}}, "--mean");
      if (o.composite) throw UsageError("check-mean: --composite cannot be used with --mean");
      mean = arithmetic_mean();
    } else if (o.composite) {
      forbid({{"--r", &o.r}}, "--composite");
      const MonotoneMap f = need("--f", o.f), g = need("--g", o.g), h = need("--h", o.h);
      triple = build_triple(f, g, h, op, cfg);
      mean = triple->D_fggh;
    } else if (!o.f.empty()) {
      forbid({{"--h", &o.h}, {"--r", &o.r}}, "--f/--g without --composite");
      mean = make_D(need("--f", o.f), need("--g", o.g), op, cfg);
    } else if (!o.g.empty()) {
      forbid({{"--h", &o.h}, {"--r", &o.r}}, "a --g generator");
      mean = make_iterative_mean(need("--g", o.g), cfg);
    } else if (!o.r.empty()) {
      forbid({{"--h", &o.h}}, "an --r generator");
      mean = make_iterative_mean_from_r(need("--r", o.r), cfg);
    } else {
      throw UsageError("check-mean needs --mean arithmetic, --r, --g, --f/--g, or --f/--g/--h with --composite");
    }
  } catch (const Error& e) {
    res.json["validation"] = validations;
    res.json["error"] = e.what();
    res.human += "construction failed: " + std::string(e.what()) + "\n";
    res.csv = "axiom,requested,pass,x,y,value,violation\n";
    res.code = kExitMathFailure;
    return res;
  }

  res.json["mean"] = {{"description", mean->description()}, {"provenance", to_string(mean->provenance())}};
  res.json["validation"] = validations;
  res.human += "mean: " + mean->description() + "\n";
  const std::string prefix = check_mean_prefix(o);

  if (!o.at.empty()) {
    const auto [x, y] = parse_point(o.at, "--at");
    const double lo = std::min(x, y), hi = std::max(x, y);
    const double slack = cfg.internal_tol * std::max(1.0, hi);
    Json point{{"x", x}, {"y", y}, {"min", lo}, {"max", hi}};
    try {
      const double v = (*mean)(x, y);
      const bool internal = v >= lo - slack && v <= hi + slack;
      point["value"] = v;
      point["internal"] = internal;
      res.code = internal ? kExitPass : kExitMathFailure;
      res.human += "M(" + fmt_double(x) + ", " + fmt_double(y) + ") = " + fmt_double(v) + "; interval [" +
                   fmt_double(lo) + ", " + fmt_double(hi) + "]; internal " + pass_word(internal) + "\n";
      res.csv = "x,y,value,min,max,internal\n" + fmt_double(x) + "," + fmt_double(y) + "," + fmt_double(v) + "," +
                fmt_double(lo) + "," + fmt_double(hi) + "," + (internal ? "true" : "false") + "\n";
    } catch (const Error& e) {
      point["error"] = e.what();
      res.code = kExitMathFailure;
      res.human += "M(" + fmt_double(x) + ", " + fmt_double(y) + ") failed: " + e.what() + "\n";
      res.csv = "x,y,value,min,max,internal\n" + fmt_double(x) + "," + fmt_double(y) + ",nan," + fmt_double(lo) +
                "," + fmt_double(hi) + ",false\n";
    }
    res.json["point"] = point;
    return res;
  }

  const MeanCheckReport checks = check_mean(*mean, cfg);
  res.json["checks"] = to_json(checks);
  if (triple) {
    try {
      res.json["invariance"] = to_json(invariance_residual(*triple, cfg));
    } catch (const Error& e) {
      res.json["invariance"] = {{"error", e.what()}};
    }
  }

  struct Row {
    const char* name;
    const AxiomResult* result;
    bool requested;
  };
  const Row rows[] = {{"reflexive", &checks.reflexive, true},
                      {"internal", &checks.internal, true},
                      {"increasing", &checks.increasing, true},
                      {"strict", &checks.strict, o.require_strict},
                      {"symmetric", &checks.symmetric, o.require_symmetric}};
  bool pass = !checks.partial;
  res.csv = "axiom,requested,pass,x,y,value,violation\n";
  for (const auto& row : rows) {
    if (row.requested) pass = pass && row.result->pass;
    res.csv += std::string(row.name) + "," + (row.requested ? "true" : "false") + "," +
               (row.result->pass ? "true" : "false");
    std::string line = std::string(row.name) + std::string(12 - std::string(row.name).size(), ' ') +
                       pass_word(row.result->pass) + (row.requested ? "" : " (not requested)");
    if (const auto& w = row.result->witness) {
      res.csv += "," + fmt_double(w->x) + "," + fmt_double(w->y) + "," + fmt_double(w->value) + "," +
                 fmt_double(w->violation);
      line += "  worst at (" + fmt_double(w->x) + ", " + fmt_double(w->y) + "): value " + fmt_double(w->value) +
              ", violation " + fmt_double(w->violation) + "\n            rerun: " + prefix + " --at " +
              fmt_double(w->x) + "," + fmt_double(w->y);
    } else {
      res.csv += ",,,,";
    }
    res.csv += "\n";
    res.human += line + "\n";
  }
  if (checks.partial && checks.partial_witness) {
    const auto& w = *checks.partial_witness;
    res.human += "partial: evaluation failed at (" + fmt_double(w.x) + ", " + fmt_double(w.y) +
                 "): " + checks.partial_reason + "\n            rerun: " + prefix + " --at " + fmt_double(w.x) +
                 "," + fmt_double(w.y) + "\n";
  }
  if (res.json.contains("invariance")) {
    const auto& inv = res.json["invariance"];
    res.human += inv.contains("error") ? "invariance: " + inv["error"].get<std::string>() + "\n"
                                       : "invariance residual: " + inv["max_residual"].dump() + "\n";
  }
  res.json["pass"] = pass;
  res.human += std::string("result: ") + pass_word(pass) + "\n";
  res.code = pass ? kExitPass : kExitMathFailure;
  return res;
}

// ---------------------------------------------------------------- gauss

MeanObject mean_from_spec(const std::string& flag, const std::string& spec, const Params& params,
                          const NumericsConfig& cfg, Json& validations) {
  if (spec == "arithmetic") return arithmetic_mean();
  if (spec.rfind("g:", 0) == 0) return make_iterative_mean(load_map(flag, spec.substr(2), params, cfg, validations), cfg);
  if (spec.rfind("r:", 0) == 0) {
    return make_iterative_mean_from_r(load_map(flag, spec.substr(2), params, cfg, validations), cfg);
  }
  throw UsageError(flag + " expects arithmetic, g:<expr> or r:<expr>, got '" + spec + "'");
}

Output cmd_gauss(const Options& o, const NumericsConfig& cfg) {
  const Params params = parse_params(o.params);
  const auto [x0, y0] = parse_point(o.start, "--start");
  Json validations = Json::object();

  Output res;
  res.json["schema_version"] = kSchemaVersion;
  res.json["command"] = "gauss";
  res.json["config"] = to_json(cfg);
  res.human = "# itermean gauss\n" + config_header(cfg);
  res.csv = "iteration,x,y\n";

  const bool by_spec = !o.m1.empty() || !o.m2.empty();
  if (by_spec && (o.m1.empty() || o.m2.empty())) throw UsageError("gauss: --m1 and --m2 go together");
  if (by_spec && (!o.g.empty() || !o.h.empty())) throw UsageError("gauss: use either --m1/--m2 or --g/--h");
  if (!by_spec && (o.g.empty() || o.h.empty())) throw UsageError("gauss needs --g and --h, or --m1 and --m2");

  try {
    const MeanObject m1 = by_spec ? mean_from_spec("--m1", o.m1, params, cfg, validations)
                                  : make_iterative_mean(load_map("--g", o.g, params, cfg, validations), cfg);
    const MeanObject m2 = by_spec ? mean_from_spec("--m2", o.m2, params, cfg, validations)
                                  : make_iterative_mean(load_map("--h", o.h, params, cfg, validations), cfg);
    res.json["m1"] = m1.description();
    res.json["m2"] = m2.description();
    res.json["validation"] = validations;
    res.json["start"] = {x0, y0};
    const GaussTrace tr = gauss_iterate(m1, m2, x0, y0, cfg);
    res.json["trace"] = to_json(tr);
    for (std::size_t i = 0; i < tr.iterates.size(); ++i) {
      res.csv += std::to_string(i) + "," + fmt_double(tr.iterates[i].first) + "," +
                 fmt_double(tr.iterates[i].second) + "\n";
    }
    res.human += "m1: " + m1.description() + "\nm2: " + m2.description() + "\n";
    for (std::size_t i = 0; i < tr.iterates.size(); ++i) {
      res.human += std::to_string(i) + "\t" + fmt_double(tr.iterates[i].first) + "\t" +
                   fmt_double(tr.iterates[i].second) + "\n";
    }
    res.human += tr.converged ? "converged after " + std::to_string(tr.iterations) + " iterations, limit " +
                                    fmt_double(tr.limit) + "\n"
                              : "not converged: " + tr.message + "\n";
    res.code = tr.converged ? kExitPass : kExitMathFailure;
  } catch (const Error& e) {
    res.json["validation"] = validations;
    res.json["error"] = e.what();
    res.human += "failed: " + std::string(e.what()) + "\n";
    res.code = kExitMathFailure;
  }
  return res;
}

// ---------------------------------------------------------------- residual-eq11

struct Sweep {
  std::string name;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--sweep expects name=lo:hi:step");
  const auto parts = split(s.substr(eq + 1), ':');
  if (parts.size() != 3) throw UsageError("--sweep expects name=lo:hi:step");
  const double lo = parse_number(parts[0], "--sweep lo");
  const double hi = parse_number(parts[1], "--sweep hi");
  const double step = parse_number(parts[2], "--sweep step");
  if (!(step > 0.0) || !(hi >= lo)) throw UsageError("--sweep needs lo <= hi and step > 0");
  Sweep sw{s.substr(0, eq), {}};
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  // snap to 12 decimals so 0.1 + 2*0.1 prints as 0.3
  for (long i = 0; i <= n; ++i) sw.values.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  return sw;
}

Output cmd_eq11(const Options& o, const NumericsConfig& cfg) {
  Params params = parse_params(o.params);
  std::optional<Sweep> sweep;
  if (!o.sweep.empty()) sweep = parse_sweep(o.sweep);

  std::vector<double> xs;
  for (const auto& item : o.xs) {
    for (const auto& part : split(item, ',')) {
      const double x = parse_number(part, "--x");
      if (!(x > 0.0)) throw UsageError("--x values must be positive");
      xs.push_back(x);
    }
  }
  if (xs.empty()) xs = cfg.mean_grid.points();

  Output res;
  res.json["schema_version"] = kSchemaVersion;
  res.json["command"] = "residual-eq11";
  res.json["config"] = to_json(cfg);
  res.json["h"] = o.h;
  if (sweep) res.json["sweep"] = {{"parameter", sweep->name}, {"values", sweep->values}};
  res.human = "# itermean residual-eq11\n" + config_header(cfg);
  res.csv = eq11_csv_header();

  const std::vector<std::optional<double>> values =
      sweep ? std::vector<std::optional<double>>(sweep->values.begin(), sweep->values.end())
            : std::vector<std::optional<double>>{std::nullopt};
  Json reports = Json::array();
  std::size_t points = 0, failed = 0;
  for (const auto& value : values) {
    if (value) params[sweep->name] = *value;
    Json validations = Json::object();
    const MonotoneMap h = load_map("--h", o.h, params, cfg, validations);
    const Eq11Report rep = eq11_residual(h, xs, cfg);
    points += rep.points.size();
    failed += rep.failed_points;

    Json entry;
    entry["parameter"] = value ? Json{{sweep->name, *value}} : Json(nullptr);
    entry["validation"] = validations["--h"];
    entry["report"] = to_json(rep);
    reports.push_back(std::move(entry));

    const std::string pvalue = value ? fmt_double(*value) : "";
    res.csv += eq11_csv_rows(rep, pvalue);
    std::string rerun = "itermean residual-eq11 --h " + quote(o.h);
    for (const auto& [k, v] : params) rerun += " --param " + k + "=" + fmt_double(v);
    for (const auto& p : rep.points) {
      res.human += (value ? sweep->name + "=" + pvalue + "  " : std::string()) + "x=" + fmt_double(p.x) + "  ";
      if (p.ok) {
        res.human += "lhs " + fmt_double(p.lhs) + "  rhs " + fmt_double(p.rhs) + "  residual " +
                     fmt_double(p.residual) + "\n";
      } else {
        res.human += "failed: " + p.error + "\n    rerun: " + rerun + " --x " + fmt_double(p.x) + "\n";
      }
    }
  }
  res.json["reports"] = reports;
  const bool all_failed = points > 0 && failed == points;
  res.json["all_failed"] = all_failed;
  res.human += std::to_string(points - failed) + " of " + std::to_string(points) + " points evaluated\n";
  res.code = all_failed ? kExitMathFailure : kExitPass;
  return res;
}

// ---------------------------------------------------------------- reproduce

Output cmd_reproduce(const Options& o) {
  const Reproduction rep = reproduce(o.scenario, !o.serial);
  Output res;
  res.json = to_json(rep);
  res.human = "# itermean reproduce " + rep.name + "\n# config " + rep.config.dump() + "\n";
  res.csv = "scenario,label,quantity,value,relation,tolerance,pass\n";
  for (const auto& c : rep.comparisons) {
    res.csv += rep.name + "," + c.label + ",\"" + c.quantity + "\"," + fmt_double(c.value) + "," + c.relation + "," +
               fmt_double(c.tolerance) + "," + (c.pass ? "true" : "false") + "\n";
    res.human += pass_word(c.pass) + "  " + (c.label.empty() ? "" : c.label + "  ") + c.quantity + " = " +
                 fmt_double(c.value) + " (" + c.relation + " " + fmt_double(c.tolerance) + ")\n";
    if (!c.rerun.empty()) res.human += "      rerun: " + c.rerun + "\n";
  }
  res.human += "result: " + pass_word(rep.pass) + "\n";
  res.code = rep.pass ? kExitPass : kExitMathFailure;
  return res;
}

// ---------------------------------------------------------------- wiring

void add_output_flags(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "json, csv or human")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  sub->add_option("--out", o.out_path, "write the report to a file instead of stdout");
  sub->add_flag("--serial", o.serial, "evaluate grids on one thread");
}

void add_numerics_flags(CLI::App* sub, Options& o) {
  sub->add_option("--param", o.params, "bind a parameter, name=value (repeatable)")->allow_extra_args(false);
  sub->add_option("--grid", o.grid, "mean grid lo:hi:n, log-spaced (default 0.1:10:21)");
  sub->add_option("--tol-series", o.tol_series, "series truncation tolerance (default 1e-12)");
  sub->add_option("--tol-inverse", o.tol_inverse, "root-finding tolerance (default 1e-12)");
  sub->add_option("--tol-gauss", o.tol_gauss, "Gauss stopping tolerance (default 1e-12)");
  sub->add_option("--max-terms", o.max_terms, "series term cap (default 10000)");
  add_output_flags(sub, o);
}

void add_function_flags(CLI::App* sub, Options& o, bool with_f) {
  if (with_f) sub->add_option("--f", o.f, "function f, e.g. 'x/w'");
  sub->add_option("--g", o.g, "function g");
  sub->add_option("--h", o.h, "function h");
  if (with_f) sub->add_option("--r", o.r, "generator r with 0 < r(x) < x");
}

void emit(const Output& res, const Options& o, std::ostream& out) {
  std::string text;
  if (o.format == "json") {
    text = res.json.dump(2) + "\n";
  } else if (o.format == "csv") {
    text = res.csv;
  } else {
    text = res.human;
  }
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open --out " + o.out_path);
  file << text;
  if (!file) throw UsageError("failed writing --out " + o.out_path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Iterative means: construction, axiom checks, Gauss iteration and residual scans", "itermean"};
  app.require_subcommand(1, 1);
  // --h names a function, so help is long-form only
  app.set_help_flag("--help", "print this help and exit");

  auto* check = app.add_subcommand("check-mean", "check the mean axioms on a log grid");
  add_function_flags(check, o, true);
  check->add_option("--mean", o.mean, "a builtin mean")->check(CLI::IsMember({"arithmetic"}));
  check->add_flag("--composite", o.composite, "check D[f o g, g o h] built from --f --g --h");
  check->add_option("--op", o.op, "groupoid operation")->check(CLI::IsMember({"add", "mul"}))->capture_default_str();
  check->add_flag("--require-symmetric", o.require_symmetric, "fail unless M(x,y) = M(y,x)");
  check->add_flag("--require-strict", o.require_strict, "fail unless the mean is strict");
  check->add_option("--at", o.at, "evaluate at one point x,y instead of the grid");
  add_numerics_flags(check, o);

  auto* gauss = app.add_subcommand("gauss", "iterate a mean-type mapping (M1, M2) to its limit");
  add_function_flags(gauss, o, false);
  gauss->add_option("--m1", o.m1, "first coordinate: arithmetic, g:<expr> or r:<expr>");
  gauss->add_option("--m2", o.m2, "second coordinate: arithmetic, g:<expr> or r:<expr>");
  gauss->add_option("--start", o.start, "starting point x,y")->required();
  add_numerics_flags(gauss, o);

  auto* eq11 = app.add_subcommand("residual-eq11", "residuals of the composite functional equation for h");
  eq11->add_option("--h", o.h, "function h")->required();
  eq11->add_option("--sweep", o.sweep, "parameter sweep name=lo:hi:step");
  eq11->add_option("--x", o.xs, "evaluation points, comma-separated (default: the mean grid)")
      ->allow_extra_args(false);
  add_numerics_flags(eq11, o);

  auto* repro = app.add_subcommand("reproduce", "run a canned scenario with pinned tolerances");
  repro->add_option("scenario", o.scenario, "example1, example2, example3 or remark7")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  add_output_flags(repro, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.back()->help());
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const NumericsConfig cfg = make_config(o);
    Output res;
    if (*check) {
      res = cmd_check_mean(o, cfg);
    } else if (*gauss) {
      res = cmd_gauss(o, cfg);
    } else if (*eq11) {
      res = cmd_eq11(o, cfg);
    } else {
      res = cmd_reproduce(o);
    }
    emit(res, o, out);
    return res.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMathFailure;
  }
}

}  // namespace itermean::cli
