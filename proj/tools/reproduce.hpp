#pragma once

#include <string>
#include <vector>

#include "itermean/config.hpp"
#include "itermean/report_json.hpp"

namespace itermean::cli {

// One compared quantity in a canned scenario.
struct Comparison {
  std::string label;     // e.g. "w=0.3"
  std::string quantity;  // e.g. "D_r - (w*x + (1-w)*y)"
  double value = 0.0;
  std::string relation = "<=";  // pass iff value <relation> tolerance
  double tolerance = 0.0;
  bool pass = false;
  std::string rerun;  // single-point command reproducing the worst witness, if any
};

struct Reproduction {
  std::string name;
  bool pass = false;
  std::vector<Comparison> comparisons;
  Json config;
  Json body;  // scenario-specific detail
};

const std::vector<std::string>& scenario_names();

/// Runs a canned scenario. Tolerances are pinned; only cfg.parallel is honored.
Reproduction reproduce(const std::string& name, bool parallel);

Json to_json(const Reproduction& r);

}  // namespace itermean::cli
