#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/rational.hpp"
#include "ivfalsify/typespace.hpp"

namespace ivfalsify {

/// Ruled-out switch relation over treatment indices for a binary
/// instrument: forbids(a, b) means the response (a under the first
/// instrument, b under the second) is excluded.
class BinaryRelation {
 public:
  explicit BinaryRelation(int n_treatments);

  /// Collect the pairs from a restriction's ruled-out set (K must be 2).
  static BinaryRelation from_restriction(const RestrictionSpec& restriction, int n_treatments);

  int n_treatments() const { return L_; }
  void forbid(int a, int b);
  bool forbids(int a, int b) const { return forbidden_.at(a).at(b); }
  std::vector<std::pair<int, int>> pairs() const;  // ascending (a, b)
  int pair_count() const;

 private:
  int L_;
  std::vector<std::vector<bool>> forbidden_;
};

/// Common forbidden-switch contour of S: the treatments x such that every
/// s in S has the switch s -> x ruled out. An empty S yields every
/// treatment.
std::vector<int> lower_contour(const BinaryRelation& rel, const std::vector<int>& S);

/// One enumerated inequality. Part 1 records compare the share of S under
/// the first instrument against the share of the contour complement under
/// the second; part 2 records sharpen the right side to P[Lambda | z1] plus
/// the overlap ceilings over Lambda'.
struct InequalityRecord {
  int part = 1;
  std::vector<int> set_s;
  std::vector<int> lambda;        // part 2 only
  std::vector<int> lambda_prime;  // part 2 only
  Rational lhs;
  Rational rhs;
  bool violated = false;
  std::uint64_t context_tag = 0;  // identifies the (law, relation) pair
};

/// All share comparisons, one per nonempty S. Throws when the treatment
/// count exceeds `cap` (default 12); callers degrade by skipping the check.
std::vector<InequalityRecord> enumerate_part1(const ObservedDistribution& d,
                                              const BinaryRelation& rel, int cap = 12);

/// All partition-form bounds: for each nonempty S and each admissible
/// partition (Lambda, Lambda') of the contour complement with Lambda'
/// drawn from S. `psi_by_treatment` supplies the overlap ceilings.
/// Default cap is 8 treatments.
std::vector<InequalityRecord> enumerate_part2(const ObservedDistribution& d,
                                              const BinaryRelation& rel,
                                              const std::vector<Rational>& psi_by_treatment,
                                              int cap = 8);

enum class DominanceCase {
  consistent = 1,          // nothing violated
  overlap_violation = 2,   // only partition-form (part 2) bounds fail
  share_violation = 3,     // some plain share comparison (part 1) fails
};

/// Three-way verdict. Both lists must stem from the same (law, relation)
/// enumeration; mixing provenance throws.
DominanceCase classify(const std::vector<InequalityRecord>& part1,
                       const std::vector<InequalityRecord>& part2);

struct OrderedBoundRecord {
  int treatment = 0;
  Rational lhs;  // share at or above the treatment, first instrument
  Rational rhs;  // overlap at the treatment + share strictly above, second instrument
  bool violated = false;
};

struct OrderedBoundReport {
  std::vector<OrderedBoundRecord> records;
  std::string note;
};

/// Ordered-treatment upper-set bounds: P[X >= x | z0] <= psi(x) + P[X > x | z1].
/// These are the singleton-carve-out members of the partition family under a
/// relation that rules out every decreasing switch; they need an ordered
/// treatment support.
OrderedBoundReport ordered_upper_set_bounds(const ObservedDistribution& d,
                                            const std::vector<Rational>& psi_by_treatment);

}  // namespace ivfalsify
