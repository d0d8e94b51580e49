#include "itermean/report_json.hpp"

#include <cmath>

#include "itermean/format.hpp"

namespace itermean {

namespace {

// JSON has no inf/nan; render them as strings instead of null
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json to_json(const Witness& w) {
  Json j;
  j["x"] = num(w.x);
  j["y"] = num(w.y);
  j["value"] = num(w.value);
  j["violation"] = num(w.violation);
  return j;
}

Json to_json(const AxiomResult& a) {
  Json j;
  j["pass"] = a.pass;
  if (a.witness) j["witness"] = to_json(*a.witness);
  return j;
}

}  // namespace

Json to_json(const LogGrid& g) {
  Json j;
  j["lo"] = g.lo;
  j["hi"] = g.hi;
  j["n"] = g.n;
  j["spacing"] = "log";
  return j;
}

Json to_json(const NumericsConfig& c) {
  Json j;
  j["inverse_tol"] = c.root.inverse_tol;
  j["max_root_iters"] = c.root.max_root_iters;
  j["max_bracket_expansions"] = c.root.max_bracket_expansions;
  j["series_tol"] = c.series_tol;
  j["divergence_cap"] = c.divergence_cap;
  j["max_terms"] = c.max_terms;
  j["divergence_patience"] = c.divergence_patience;
  j["collapse_linear"] = c.collapse_linear;
  j["validation_grid"] = to_json(c.validation_grid);
  j["mean_grid"] = to_json(c.mean_grid);
  j["reflexive_tol"] = c.reflexive_tol;
  j["internal_tol"] = c.internal_tol;
  j["hypothesis_tol"] = c.hypothesis_tol;
  j["gauss_tol"] = c.gauss_tol;
  j["gauss_max_iters"] = c.gauss_max_iters;
  j["remark7_lo"] = c.remark7_lo;
  j["remark7_hi"] = c.remark7_hi;
  j["remark7_step"] = c.remark7_step;
  return j;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["monotone"] = to_string(r.monotone);
  j["surjective"] = to_string(r.surjective);
  j["slope_near_zero"] = num(r.slope_near_zero);
  j["slope_near_infinity"] = num(r.slope_near_infinity);
  if (r.failure_witness) j["failure_witness"] = {r.failure_witness->first, r.failure_witness->second};
  j["samples"] = r.samples.size();
  return j;
}

Json to_json(const MeanCheckReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["reflexive"] = to_json(r.reflexive);
  j["internal"] = to_json(r.internal);
  j["strict"] = to_json(r.strict);
  j["symmetric"] = to_json(r.symmetric);
  j["increasing"] = to_json(r.increasing);
  j["partial"] = r.partial;
  if (r.partial) {
    if (r.partial_witness) j["partial_witness"] = to_json(*r.partial_witness);
    j["partial_reason"] = r.partial_reason;
  }
  j["is_mean"] = r.is_mean();
  j["is_strict_mean"] = r.is_strict_mean();
  j["grid"] = to_json(r.grid);
  j["tolerances"] = {{"reflexive", r.reflexive_tol}, {"internal", r.internal_tol}};
  return j;
}

Json to_json(const SeriesReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["converged"] = r.converged;
  j["terms_used"] = r.terms_used;
  j["tail_estimate"] = num(r.tail_estimate);
  Json vals = Json::array();
  for (const auto& [x, s] : r.values) vals.push_back({num(x), num(s)});
  j["values"] = vals;
  if (r.divergence_witness) j["divergence_witness"] = *r.divergence_witness;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

Json to_json(const InvarianceReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["max_residual"] = num(r.max_residual);
  j["witness"] = {num(r.witness_x), num(r.witness_y)};
  j["hypotheses_met"] = r.hypotheses_met;
  j["hypothesis_fg"] = num(r.hypothesis_fg);
  j["hypothesis_gh"] = num(r.hypothesis_gh);
  return j;
}

Json to_json(const GaussTrace& t) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["converged"] = t.converged;
  j["limit"] = num(t.limit);
  j["iterations"] = t.iterations;
  Json its = Json::array();
  for (const auto& [x, y] : t.iterates) its.push_back({num(x), num(y)});
  j["iterates"] = its;
  if (!t.message.empty()) j["message"] = t.message;
  return j;
}

Json to_json(const Eq11Report& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["h"] = r.h_label;
  j["series_tol"] = r.series_tol;
  j["max_residual"] = num(r.max_residual);
  j["failed_points"] = r.failed_points;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json q;
    q["x"] = num(p.x);
    q["ok"] = p.ok;
    if (p.ok) {
      q["lhs"] = num(p.lhs);
      q["rhs"] = num(p.rhs);
      q["residual"] = num(p.residual);
      q["truncation_terms"] = {{"inner", p.inner_terms}, {"lhs", p.lhs_terms}, {"rhs", p.rhs_terms}};
    } else {
      q["error"] = p.error;
    }
    pts.push_back(std::move(q));
  }
  j["grid_residuals"] = pts;
  return j;
}

Json to_json(const Remark7Report& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["roles"] = {{"a", "f'(0)"}, {"b", "g'(0)"}, {"c", "h'(0)"}};
  j["feasible"] = r.feasible;
  j["algebra_infeasible"] = r.algebra_infeasible;
  j["elimination_trace"] = r.elimination_trace;
  j["grid_min_violation"] = num(r.grid_min_violation);
  j["grid_argmin"] = {r.grid_argmin[0], r.grid_argmin[1], r.grid_argmin[2]};
  j["points_per_axis"] = r.points_per_axis;
  j["step"] = r.step;
  return j;
}

Json to_json(const Remark3Report& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["hypothesis_ok"] = r.hypothesis_ok;
  if (!r.hypothesis_ok) {
    j["hypothesis_message"] = r.hypothesis_message;
    if (r.hypothesis_witness_x) j["hypothesis_witness_x"] = *r.hypothesis_witness_x;
    return j;
  }
  j["identity_residual"] = num(r.identity_residual);
  j["linear_form_residual"] = num(r.linear_form_residual);
  j["deviation_from_arithmetic"] = num(r.deviation_from_arithmetic);
  j["reduces_to_arithmetic"] = r.reduces_to_arithmetic;
  j["checks"] = to_json(r.checks);
  return j;
}

std::string eq11_csv_header() { return "parameter,x,lhs,rhs,residual\n"; }

std::string eq11_csv_rows(const Eq11Report& r, const std::string& parameter) {
  std::string out;
  for (const auto& p : r.points) {
    out += parameter;
    out += ',';
    out += detail::fmt_double(p.x);
    out += ',';
    if (p.ok) {
      out += detail::fmt_double(p.lhs) + ',' + detail::fmt_double(p.rhs) + ',' + detail::fmt_double(p.residual);
    } else {
      out += "nan,nan,nan";
    }
    out += '\n';
  }
  return out;
}

}  // namespace itermean
