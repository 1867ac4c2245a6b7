#pragma once

#include <cstdint>
#include <string>

#include "ivfalsify/config.hpp"

namespace ivfalsify {

/// Outcome of one run. `document` is the structured report (deterministic
/// JSON: same config and inputs give byte-identical output); `text` is the
/// human rendering of the same content.
struct Report {
  bool falsified = false;
  std::string document;
  std::string text;
};

/// Execute the configured checks in order (overlap table, linear system,
/// flow cross-check, dominance classification, ordered bounds, ranking
/// harness) against one observed law. Throws std::invalid_argument on bad
/// input; internal cross-check disagreements throw std::logic_error.
Report run(const RunConfig& config);

struct SelfCheckResult {
  bool passed = false;
  long trials = 0;
  std::string summary;
};

/// Seeded cross-validation sweep: random laws and restrictions, checking
/// that the linear system, the flow network, and the dominance family agree
/// on consistency (with and without overlap ceilings), that the solver
/// matches the brute-force referee wherever the referee is definite, and
/// that laws generated from valid processes are never falsified.
SelfCheckResult selfcheck(std::uint64_t seed, long trials);

}  // namespace ivfalsify
