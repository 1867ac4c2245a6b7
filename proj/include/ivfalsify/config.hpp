#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/simulate.hpp"
#include "ivfalsify/typespace.hpp"

namespace ivfalsify {

/// Which checks a run executes. Feasibility is the default workhorse; the
/// others are opt-in because some require a binary instrument or an ordered
/// treatment support.
struct RunChecks {
  bool feasibility = true;
  bool flow = false;
  bool fosd = false;
  bool ordered_bounds = false;
  bool sufficient_takers = false;
  bool submono_harness = false;
};

/// Enumeration ceilings. Oversized inputs produce skip notices, not errors.
struct RunCaps {
  long types = 4096;       // response-type space size
  long subsets = 4096;     // instrument subsets per treatment in the overlap table
  int part1 = 12;          // treatment count for share comparisons
  int part2 = 8;           // treatment count for partition-form bounds
  int submono = 5;         // treatment count for the ranking harness
};

/// A full run request: the observed law (as explicit cells or raw record
/// text), an optional binarization cut, the declared restriction, and the
/// check/caps selection.
struct RunConfig {
  Support support;
  std::vector<Cell> table;
  std::string records_text;  // delimiter-separated records; used when table is empty
  std::optional<std::string> binarize_at;
  RestrictionSpec restriction;
  RunChecks checks;
  RunCaps caps;
};

/// Parse a run request from its JSON document. Masses and coefficients must
/// be strings ("1/2", "0.25") or integer literals; fractional number
/// literals are rejected to keep arithmetic exact. Structural mismatches
/// (flow or partition checks without a binary instrument, ordered bounds
/// without a declared order) are rejected here.
RunConfig parse_run_config(const std::string& json_text);

/// Parse a data-generating process from its JSON document (same conventions).
DGPSpec parse_dgp_config(const std::string& json_text);

/// Serialize a process back to the document format; parse_dgp_config of the
/// output reproduces the process description exactly.
std::string dgp_config_json(const DGPSpec& dgp);

/// Serialize a run request back to the document format. Parsing the output
/// reproduces the request (restriction expansion is idempotent), so emitted
/// laws are directly runnable.
std::string run_config_json(const RunConfig& config);

/// The built-in restriction presets as (name, one-line description) pairs,
/// in the order the preset enumeration declares them.
std::vector<std::pair<std::string, std::string>> restriction_preset_catalog();

/// The worked three-treatment example as a ready-to-run request with every
/// binary-instrument check enabled.
RunConfig worked_example_run_config();

/// Normalize a restriction against the support a run actually uses:
/// presets re-expand (idempotent) and explicit ruled-out vectors without a
/// preset are treated as custom.
RestrictionSpec effective_restriction(const RestrictionSpec& restriction, const Support& support);

}  // namespace ivfalsify
