#pragma once

// Versioned JSON documents for every report type. Keys are emitted in a
// fixed order and doubles with round-trip precision, so identical inputs
// serialize to identical bytes.

#include <string>

#include <json.hpp>

#include "itermean/config.hpp"
#include "itermean/expr.hpp"
#include "itermean/invariance.hpp"
#include "itermean/means.hpp"
#include "itermean/series.hpp"

namespace itermean {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const LogGrid& g);
Json to_json(const NumericsConfig& cfg);
Json to_json(const ValidationReport& r);
Json to_json(const MeanCheckReport& r);
Json to_json(const SeriesReport& r);
Json to_json(const InvarianceReport& r);
Json to_json(const GaussTrace& t);
Json to_json(const Eq11Report& r);
Json to_json(const Remark7Report& r);
Json to_json(const Remark3Report& r);

/// Header line plus one row per point: parameter,x,lhs,rhs,residual.
std::string eq11_csv_header();
std::string eq11_csv_rows(const Eq11Report& r, const std::string& parameter);

}  // namespace itermean
