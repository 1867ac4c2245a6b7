#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ivfalsify/rational.hpp"

namespace ivfalsify {

/// One outcome bin. Bins either all carry numeric bounds (numeric mode, used
/// to locate raw record outcomes) or none do (label mode, record outcomes
/// must equal a bin label). Bounds are [lo, hi) with the last bin closed.
struct OutcomeBin {
  std::string label;
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

/// Finite supports: outcome bins, treatment values, instrument values.
/// When `treatments_ordered` is set the treatment list order is the declared
/// total order (needed by ordered-monotone restrictions, binarization, and
/// the ordered-difference bounds).
struct Support {
  std::vector<OutcomeBin> outcome_bins;
  std::vector<std::string> treatments;
  std::vector<std::string> instruments;
  bool treatments_ordered = false;

  int n_bins() const { return static_cast<int>(outcome_bins.size()); }
  int n_treatments() const { return static_cast<int>(treatments.size()); }
  int n_instruments() const { return static_cast<int>(instruments.size()); }

  bool numeric_bins() const;

  int bin_index(std::string_view label) const;
  int treatment_index(std::string_view label) const;
  int instrument_index(std::string_view label) const;

  /// Locate a numeric outcome in the declared bins; throws when the value
  /// falls outside every bin (a boundary value goes to the bin holding it as
  /// the closed left endpoint).
  int bin_for_value(const Rational& y) const;

  /// Throws std::invalid_argument on duplicate/empty labels, empty supports,
  /// fewer than two instruments, mixed bounded/unbounded bins, or
  /// non-increasing/overlapping bin bounds.
  void validate() const;
};

/// One cell of the conditional law: P[Y in bin, X = treatment | Z = instrument].
struct Cell {
  int instrument = 0;
  int treatment = 0;
  int bin = 0;
  Rational mass;
};

/// A raw observation used for ingestion.
struct Record {
  std::string y;
  std::string x;
  std::string z;
};

/// Exact conditional law of (outcome bin, treatment) given each instrument
/// value, stored densely as phi[z][x][b]. Every z-slice sums to one.
class ObservedDistribution {
 public:
  /// Build from an explicit cell list; unmentioned cells are zero and
  /// duplicate (z,x,b) keys accumulate. Each z-slice must sum to one.
  static ObservedDistribution from_cells(Support support, const std::vector<Cell>& cells);

  /// Build from a record multiset: per-instrument empirical frequencies,
  /// exact. Every instrument value must appear in at least one record.
  static ObservedDistribution from_records(Support support, const std::vector<Record>& records);

  /// Parse delimiter-separated text (comma or tab, sniffed from the header).
  /// The header row must name columns y, x, z (any order, case-insensitive).
  static ObservedDistribution from_csv(Support support, std::string_view text);

  const Support& support() const { return support_; }

  /// phi[z][x][b] = P[Y in bin b, X = x | Z = z].
  const Rational& mass(int z, int x, int b) const;

  /// P[X = x | Z = z], the bin-marginalized treatment share.
  Rational cond_treatment(int z, int x) const;

  /// Collapse treatments into {below cut, cut and above} along the declared
  /// order. Requires an ordered treatment support and 0 < cut < L.
  ObservedDistribution binarize(int cut_treatment) const;

  /// Emit nonzero cells sorted by (instrument, treatment, bin).
  std::vector<Cell> to_cells() const;

 private:
  ObservedDistribution(Support support, std::vector<std::vector<std::vector<Rational>>> table);

  Support support_;
  std::vector<std::vector<std::vector<Rational>>> phi_;
};

}  // namespace ivfalsify
