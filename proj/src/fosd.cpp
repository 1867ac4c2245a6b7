#include "ivfalsify/fosd.hpp"

#include <stdexcept>

namespace ivfalsify {

BinaryRelation::BinaryRelation(int n_treatments) : L_(n_treatments) {
  if (L_ < 1) throw std::invalid_argument("relation needs at least one treatment");
  forbidden_.assign(L_, std::vector<bool>(L_, false));
}

BinaryRelation BinaryRelation::from_restriction(const RestrictionSpec& restriction,
                                                int n_treatments) {
  BinaryRelation rel(n_treatments);
  for (const auto& response : restriction.ruled_out) {
    if (response.size() != 2) {
      throw std::invalid_argument("ruled-out response vector length does not match K=2");
    }
    rel.forbid(response[0], response[1]);
  }
  return rel;
}

void BinaryRelation::forbid(int a, int b) {
  if (a < 0 || a >= L_ || b < 0 || b >= L_) {
    throw std::invalid_argument("treatment index out of range");
  }
  forbidden_[a][b] = true;
}

std::vector<std::pair<int, int>> BinaryRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < L_; ++a)
    for (int b = 0; b < L_; ++b)
      if (forbidden_[a][b]) out.emplace_back(a, b);
  return out;
}

int BinaryRelation::pair_count() const { return static_cast<int>(pairs().size()); }

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a_str(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Stable tag for the (law, relation) pair so classify can refuse mixed
/// record lists.
std::uint64_t context_tag_for(const ObservedDistribution& d, const BinaryRelation& rel) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, static_cast<std::uint64_t>(rel.n_treatments()));
  for (const auto& [a, b] : rel.pairs()) {
    h = fnv1a(h, static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint64_t>(b));
  }
  for (int z = 0; z < d.support().n_instruments(); ++z)
    for (int x = 0; x < d.support().n_treatments(); ++x)
      for (int b = 0; b < d.support().n_bins(); ++b)
        h = fnv1a_str(h, format_rational(d.mass(z, x, b)));
  return h;
}

std::vector<int> mask_to_set(unsigned mask, int L) {
  std::vector<int> out;
  for (int x = 0; x < L; ++x) {
    if (mask & (1u << x)) out.push_back(x);
  }
  return out;
}

void check_binary_instrument(const ObservedDistribution& d, const BinaryRelation& rel) {
  if (d.support().n_instruments() != 2) {
    throw std::invalid_argument("share comparisons need a binary instrument");
  }
  if (rel.n_treatments() != d.support().n_treatments()) {
    throw std::invalid_argument("relation treatment count does not match the law");
  }
}

/// contour_complement[m] = bitmask of treatments NOT in the common
/// forbidden-switch contour of the set with bitmask m.
std::vector<unsigned> contour_complements(const BinaryRelation& rel) {
  const int L = rel.n_treatments();
  const unsigned full = (1u << L) - 1;
  std::vector<unsigned> row(L, 0);
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      if (rel.forbids(a, b)) row[a] |= 1u << b;
  std::vector<unsigned> out(1u << L);
  for (unsigned m = 0; m <= full; ++m) {
    unsigned contour = full;  // empty set -> every treatment
    for (int a = 0; a < L; ++a) {
      if (m & (1u << a)) contour &= row[a];
    }
    out[m] = full & ~contour;
  }
  return out;
}

}  // namespace

std::vector<int> lower_contour(const BinaryRelation& rel, const std::vector<int>& S) {
  const int L = rel.n_treatments();
  std::vector<int> out;
  for (int x = 0; x < L; ++x) {
    bool in_contour = true;
    for (int s : S) {
      if (s < 0 || s >= L) throw std::invalid_argument("treatment index out of range");
      if (!rel.forbids(s, x)) { in_contour = false; break; }
    }
    if (in_contour) out.push_back(x);
  }
  return out;
}

std::vector<InequalityRecord> enumerate_part1(const ObservedDistribution& d,
                                              const BinaryRelation& rel, int cap) {
  check_binary_instrument(d, rel);
  const int L = d.support().n_treatments();
  if (L > cap) {
    throw std::invalid_argument("share comparison enumeration capped at " +
                                std::to_string(cap) + " treatments");
  }
  const std::uint64_t tag = context_tag_for(d, rel);
  auto complements = contour_complements(rel);

  std::vector<Rational> share0(L), share1(L);
  for (int x = 0; x < L; ++x) {
    share0[x] = d.cond_treatment(0, x);
    share1[x] = d.cond_treatment(1, x);
  }

  std::vector<InequalityRecord> records;
  const unsigned full = (1u << L) - 1;
  for (unsigned m = 1; m <= full; ++m) {
    InequalityRecord r;
    r.part = 1;
    r.set_s = mask_to_set(m, L);
    r.lhs = 0;
    for (int x : r.set_s) r.lhs += share0[x];
    r.rhs = 0;
    for (int x : mask_to_set(complements[m], L)) r.rhs += share1[x];
    r.violated = r.lhs > r.rhs;
    r.context_tag = tag;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<InequalityRecord> enumerate_part2(const ObservedDistribution& d,
                                              const BinaryRelation& rel,
                                              const std::vector<Rational>& psi_by_treatment,
                                              int cap) {
  check_binary_instrument(d, rel);
  const int L = d.support().n_treatments();
  if (static_cast<int>(psi_by_treatment.size()) != L) {
    throw std::invalid_argument("overlap vector length does not match the treatment count");
  }
  if (L > cap) {
    throw std::invalid_argument("partition-form enumeration capped at " +
                                std::to_string(cap) + " treatments");
  }
  const std::uint64_t tag = context_tag_for(d, rel);
  auto complements = contour_complements(rel);

  std::vector<Rational> share0(L), share1(L);
  for (int x = 0; x < L; ++x) {
    share0[x] = d.cond_treatment(0, x);
    share1[x] = d.cond_treatment(1, x);
  }
  // Per-singleton contour complements with the point itself removed,
  // for the adjacency condition on Lambda'.
  std::vector<unsigned> single_rest(L);
  for (int x = 0; x < L; ++x) {
    single_rest[x] = complements[1u << x] & ~(1u << x);
  }

  std::vector<InequalityRecord> records;
  const unsigned full = (1u << L) - 1;
  for (unsigned m = 1; m <= full; ++m) {
    const unsigned lc_comp = complements[m];
    const unsigned inner = lc_comp & m;  // Lambda' candidates live in S
    for (unsigned lp = inner; lp; lp = (lp - 1) & inner) {
      const unsigned lambda = lc_comp & ~lp;
      bool admissible = true;
      // Every point of Lambda' must have the rest of its own contour
      // complement inside Lambda.
      for (int x = 0; x < L && admissible; ++x) {
        if ((lp & (1u << x)) && (single_rest[x] & ~lambda)) admissible = false;
      }
      // The contour complement of S minus Lambda' must sit inside Lambda.
      if (admissible && (complements[m & ~lp] & ~lambda)) admissible = false;
      if (!admissible) continue;

      InequalityRecord r;
      r.part = 2;
      r.set_s = mask_to_set(m, L);
      r.lambda = mask_to_set(lambda, L);
      r.lambda_prime = mask_to_set(lp, L);
      r.lhs = 0;
      for (int x : r.set_s) r.lhs += share0[x];
      r.rhs = 0;
      for (int x : r.lambda) r.rhs += share1[x];
      for (int x : r.lambda_prime) r.rhs += psi_by_treatment[x];
      r.violated = r.lhs > r.rhs;
      r.context_tag = tag;
      records.push_back(std::move(r));
    }
  }
  return records;
}

DominanceCase classify(const std::vector<InequalityRecord>& part1,
                       const std::vector<InequalityRecord>& part2) {
  std::uint64_t tag = 0;
  bool have_tag = false;
  auto check = [&](const std::vector<InequalityRecord>& records, int expected_part) {
    for (const auto& r : records) {
      if (r.part != expected_part) {
        throw std::invalid_argument("record list mixes enumeration parts");
      }
      if (have_tag && r.context_tag != tag) {
        throw std::invalid_argument("mismatched provenance: records stem from "
                                    "different (law, relation) enumerations");
      }
      tag = r.context_tag;
      have_tag = true;
    }
  };
  check(part1, 1);
  check(part2, 2);

  for (const auto& r : part1) {
    if (r.violated) return DominanceCase::share_violation;
  }
  for (const auto& r : part2) {
    if (r.violated) return DominanceCase::overlap_violation;
  }
  return DominanceCase::consistent;
}

OrderedBoundReport ordered_upper_set_bounds(const ObservedDistribution& d,
                                            const std::vector<Rational>& psi_by_treatment) {
  const Support& s = d.support();
  if (s.n_instruments() != 2) {
    throw std::invalid_argument("upper-set bounds need a binary instrument");
  }
  if (!s.treatments_ordered) {
    throw std::invalid_argument("upper-set bounds need an ordered treatment support");
  }
  const int L = s.n_treatments();
  if (static_cast<int>(psi_by_treatment.size()) != L) {
    throw std::invalid_argument("overlap vector length does not match the treatment count");
  }

  OrderedBoundReport report;
  report.note =
      "each bound caps the at-or-above share under the first instrument by the "
      "stay-put overlap at the cut plus the strictly-above share under the second; "
      "the strictly-above form is the one the partition family implies";
  for (int l = 0; l < L; ++l) {
    OrderedBoundRecord r;
    r.treatment = l;
    r.lhs = 0;
    for (int j = l; j < L; ++j) r.lhs += d.cond_treatment(0, j);
    r.rhs = psi_by_treatment[l];
    for (int j = l + 1; j < L; ++j) r.rhs += d.cond_treatment(1, j);
    r.violated = r.lhs > r.rhs;
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace ivfalsify
