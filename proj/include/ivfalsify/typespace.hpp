#pragma once

#include <string>
#include <vector>

#include "ivfalsify/feasibility.hpp"
#include "ivfalsify/observed.hpp"
#include "ivfalsify/psi.hpp"
#include "ivfalsify/rational.hpp"

namespace ivfalsify {

/// The space of instrument-response types t : Z -> X, i.e. length-K vectors
/// of treatment indices. Types are indexed lexicographically with the first
/// instrument as the most significant digit: index = sum_k t_k * L^(K-1-k).
class TypeSpace {
 public:
  /// Throws when L^K would exceed `cap` (default 4096); raise the cap
  /// deliberately for larger supports.
  TypeSpace(int n_treatments, int n_instruments, long cap = 4096);

  long size() const { return size_; }
  int n_treatments() const { return L_; }
  int n_instruments() const { return K_; }

  std::vector<int> type(long index) const;
  long index_of(const std::vector<int>& response) const;

  /// "(x1,x0)" style rendering using the support's treatment labels.
  std::string describe(long index, const Support& support) const;

 private:
  int L_;
  int K_;
  long size_;
};

/// Mass assigned to each instrument-response type, indexed by TypeSpace.
using TypeDistribution = std::vector<Rational>;

enum class Preset { none, no_defiers, ordered_monotone, unordered_monotone, custom };

const char* preset_name(Preset preset);
Preset preset_from_name(const std::string& name);

/// Extra user-declared inequality over type masses: sum of (response
/// vector, coefficient) terms <= rhs.
struct ExtraRow {
  std::vector<std::pair<std::vector<int>, Rational>> terms;
  Rational rhs;
  std::string label;
};

/// A declared instrument-response restriction: a set of ruled-out response
/// vectors plus optional extra inequality rows.
struct RestrictionSpec {
  Preset preset = Preset::none;
  std::vector<std::vector<int>> ruled_out;  // sorted, unique response vectors
  std::vector<ExtraRow> extra_rows;
  std::vector<int> promoted;  // the promoted treatment set (unordered_monotone)
};

/// Expand a preset into an explicit ruled-out set. Pure in its inputs, so
/// re-expansion is idempotent.
///   none               -> nothing ruled out
///   no_defiers         -> binary treatment + binary instrument; rules out (x1,x0)
///   ordered_monotone   -> any K; rules out every response vector that is not
///                         weakly increasing along the declared treatment order
///   unordered_monotone -> binary instrument; given the promoted set, rules
///                         out every switch except complement -> promoted
///   custom             -> caller-provided ruled-out vectors, normalized
RestrictionSpec make_restriction(Preset preset, const Support& support,
                                 std::vector<int> promoted = {},
                                 std::vector<std::vector<int>> custom_ruled_out = {},
                                 std::vector<ExtraRow> extra_rows = {});

/// Equality rows P[type takes x at z] aggregated per (instrument, treatment)
/// cell, in (z, x) order, plus one trailing adding-up row (total mass one).
LinearSystem build_consistency_system(const ObservedDistribution& d, const TypeSpace& types);

/// Each ruled-out type j contributes the row pair e_j <= 0 and -e_j <= 0;
/// extra rows are appended as given.
std::vector<Row> build_restriction_rows(const TypeSpace& types, const Support& support,
                                        const RestrictionSpec& restriction);

/// Binary-instrument overlap ceilings: for every treatment x, the mass of
/// the constant type (x,x) is capped by the overlap of the two observed
/// sub-densities at x. Throws unless exactly two instrument values.
std::vector<Row> build_always_taker_rows(const ObservedDistribution& d, const TypeSpace& types);

/// General-K overlap ceilings: for every table entry (x, subset), the mass
/// of types taking x at every instrument in the subset is capped by the
/// subset's overlap mass.
std::vector<Row> build_sufficient_taker_rows(const ObservedDistribution& d,
                                             const TypeSpace& types, const PsiTable& psi);

}  // namespace ivfalsify
