#include "ivfalsify/psi.hpp"

#include <algorithm>
#include <stdexcept>

namespace ivfalsify {

namespace {

void check_subset(const ObservedDistribution& d, int treatment,
                  const std::vector<int>& instruments) {
  if (treatment < 0 || treatment >= d.support().n_treatments()) {
    throw std::invalid_argument("treatment index outside the support");
  }
  if (instruments.empty()) throw std::invalid_argument("instrument subset is empty");
  for (size_t i = 0; i < instruments.size(); ++i) {
    if (instruments[i] < 0 || instruments[i] >= d.support().n_instruments()) {
      throw std::invalid_argument("instrument index outside the support");
    }
    if (i > 0 && instruments[i - 1] >= instruments[i]) {
      throw std::invalid_argument("instrument subset must be sorted and unique");
    }
  }
}

}  // namespace

std::vector<Rational> pointwise_min(const ObservedDistribution& d, int treatment,
                                    const std::vector<int>& instruments) {
  check_subset(d, treatment, instruments);
  const int B = d.support().n_bins();
  std::vector<Rational> minima(B);
  for (int b = 0; b < B; ++b) {
    Rational m = d.mass(instruments.front(), treatment, b);
    for (size_t i = 1; i < instruments.size(); ++i) {
      m = std::min(m, d.mass(instruments[i], treatment, b));
    }
    minima[b] = m;
  }
  return minima;
}

Rational psi_mass(const ObservedDistribution& d, int treatment,
                  const std::vector<int>& instruments) {
  Rational total = 0;
  for (const auto& m : pointwise_min(d, treatment, instruments)) total += m;
  return total;
}

PsiTable::PsiTable(std::vector<PsiEntry> entries, int max_subset_size)
    : entries_(std::move(entries)), max_subset_size_(max_subset_size) {}

const PsiEntry& PsiTable::at(int treatment, const std::vector<int>& instruments) const {
  for (const auto& e : entries_) {
    if (e.treatment == treatment && e.instruments == instruments) return e;
  }
  throw std::invalid_argument("no overlap entry for the requested treatment/subset");
}

PsiTable build_psi_table(const ObservedDistribution& d, int max_subset_size,
                         long subset_cap) {
  const int K = d.support().n_instruments();
  const int L = d.support().n_treatments();
  if (max_subset_size < 2 || max_subset_size > K) {
    throw std::invalid_argument("subset size limit must lie in [2, #instruments]");
  }
  if (K > 12) {
    throw std::invalid_argument("more than 12 instrument values; reduce the support "
                                "or raise the subset cap knob deliberately");
  }

  // Enumerate subsets by size, lexicographically within each size.
  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      subsets.push_back(current);
      return;
    }
    for (int z = start; z <= K - remaining; ++z) {
      current.push_back(z);
      self(self, z + 1, remaining - 1);
      current.pop_back();
    }
  };
  for (int size = 2; size <= max_subset_size; ++size) recurse(recurse, 0, size);

  if (static_cast<long>(subsets.size()) > subset_cap) {
    throw std::invalid_argument("instrument subset count " + std::to_string(subsets.size()) +
                                " exceeds the cap of " + std::to_string(subset_cap));
  }

  std::vector<PsiEntry> entries;
  entries.reserve(static_cast<size_t>(L) * subsets.size());
  for (int x = 0; x < L; ++x) {
    for (const auto& zs : subsets) {
      PsiEntry e;
      e.treatment = x;
      e.instruments = zs;
      e.per_bin = pointwise_min(d, x, zs);
      e.total = 0;
      for (const auto& m : e.per_bin) e.total += m;
      entries.push_back(std::move(e));
    }
  }
  return PsiTable(std::move(entries), max_subset_size);
}

}  // namespace ivfalsify
