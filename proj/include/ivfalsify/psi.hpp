#pragma once

#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/rational.hpp"

namespace ivfalsify {

/// Per-bin pointwise minimum of the sub-densities phi[z][x][.] across the
/// given instrument values. `instruments` must be nonempty, sorted, unique,
/// and in range.
std::vector<Rational> pointwise_min(const ObservedDistribution& d, int treatment,
                                    const std::vector<int>& instruments);

/// Total overlap mass: the per-bin minima summed over bins. This is the
/// sharp ceiling on the mass of types that take `treatment` at every
/// instrument value in the subset.
Rational psi_mass(const ObservedDistribution& d, int treatment,
                  const std::vector<int>& instruments);

/// Overlap ceiling for one (treatment, instrument subset) pair.
struct PsiEntry {
  int treatment = 0;
  std::vector<int> instruments;  // sorted subset, size >= 2
  std::vector<Rational> per_bin;
  Rational total;
};

/// All overlap ceilings for instrument subsets of size 2..max_subset_size,
/// per treatment, enumerated by subset size then lexicographically.
class PsiTable {
 public:
  PsiTable(std::vector<PsiEntry> entries, int max_subset_size);

  const std::vector<PsiEntry>& entries() const { return entries_; }
  int max_subset_size() const { return max_subset_size_; }

  /// Lookup by exact (treatment, sorted subset) key; throws when absent.
  const PsiEntry& at(int treatment, const std::vector<int>& instruments) const;

 private:
  std::vector<PsiEntry> entries_;
  int max_subset_size_;
};

/// Build the table. Refuses more than `subset_cap` subsets per treatment
/// (default 4096) and more than 12 instrument values; widen the cap
/// explicitly to go past either guard.
PsiTable build_psi_table(const ObservedDistribution& d, int max_subset_size,
                         long subset_cap = 4096);

}  // namespace ivfalsify
