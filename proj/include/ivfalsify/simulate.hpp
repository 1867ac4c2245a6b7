#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/rational.hpp"
#include "ivfalsify/typespace.hpp"

namespace ivfalsify {

/// One latent stratum: an instrument response (treatment index per
/// instrument), a potential-outcome bin per treatment, and a weight.
struct DGPType {
  std::vector<int> response;
  std::vector<int> outcome_bins;
  Rational weight;
};

/// A complete data-generating process at the granularity the toolkit
/// reasons about. `exclusion_break` maps (treatment, instrument) to an
/// overriding outcome bin — a controlled violation of outcome exclusion.
/// A nonempty `per_instrument_tables` replaces the shared table with one
/// table per instrument value — a controlled violation of independence.
struct DGPSpec {
  Support support;
  std::vector<DGPType> type_table;
  std::vector<Rational> instrument_law;
  std::map<std::pair<int, int>, int> exclusion_break;
  std::vector<std::vector<DGPType>> per_instrument_tables;

  /// Throws std::invalid_argument on out-of-range indices, negative
  /// weights, or weights not summing to one.
  void validate() const;
};

/// Forward summation: each stratum sends its weight to the cell
/// (z, x = response at z, bin = potential outcome at x, possibly
/// overridden by an exclusion break).
ObservedDistribution generate_observed(const DGPSpec& dgp);

/// The three-treatment fixture: strata (x0,x1) -> 1/2, (x1,x2) -> 1/4,
/// (x2,x2) -> 1/4, potential outcomes (y0, y1, y1), uniform instrument law.
DGPSpec worked_example_dgp();

/// A seeded process whose strata respect the restriction's ruled-out set:
/// the generated law is consistent with validity by construction. The
/// restriction's preset is expanded against the generated support; extra
/// linear rows are not supported here.
DGPSpec random_valid_dgp(std::uint64_t seed, int n_treatments, int n_instruments, int n_bins,
                         const RestrictionSpec& restriction);

/// An exact record multiset realizing the law jointly with the instrument
/// weights: every cell appears with count mass * common-denominator, so
/// re-ingesting the records reproduces the law exactly. Throws when the
/// realization needs more than `max_records` rows or an instrument has
/// zero weight.
std::vector<Record> records_realizing(const ObservedDistribution& d,
                                      const std::vector<Rational>& instrument_law,
                                      long max_records = 1000000);

}  // namespace ivfalsify
