#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ivfalsify/fosd.hpp"
#include "ivfalsify/rational.hpp"
#include "ivfalsify/typespace.hpp"

namespace ivfalsify {

/// A strict preference ranking over treatments: a permutation of the
/// treatment indices, most preferred first.
using Ranking = std::vector<int>;

/// Latent preference type for a binary instrument: one strict ranking per
/// instrument value. A rational unit picks the top of the active ranking.
struct PreferenceProfile {
  Ranking at_first;
  Ranking at_second;

  bool operator==(const PreferenceProfile&) const = default;
};

/// The response the profile induces: (top under the first instrument, top
/// under the second).
std::pair<int, int> induced_response(const PreferenceProfile& profile);

/// True iff the profile reverses some forbidden switch: a ranked before b
/// under the first instrument but after b under the second while the
/// relation forbids (a, b). Distributions placing mass on such profiles are
/// exactly the ones the submonotonicity discipline excludes.
bool reversal_violates(const PreferenceProfile& profile, const BinaryRelation& rel);

/// The canonical witness profile: ranks a first and b second under the
/// first instrument, swaps them under the second, and orders everything
/// else by index. It reverses exactly the pair (a, b); with a == b it is
/// constant and reverses nothing.
PreferenceProfile two_profile_witness(int a, int b, int n_treatments);

/// All L! strict rankings in lexicographic order.
std::vector<Ranking> all_rankings(int n_treatments);

/// Distribution over latent preference profiles as (profile, weight) pairs.
using LatentDistribution = std::vector<std::pair<PreferenceProfile, Rational>>;

/// Push a latent distribution forward to response-type masses. Weights must
/// be nonnegative and sum to one.
TypeDistribution induced_type_distribution(const LatentDistribution& h, const TypeSpace& types);

/// Lift a response-type distribution with no mass on forbidden types to a
/// latent distribution that is submonotone for the relation and pushes
/// forward to exactly the input. Throws when the input puts mass on a
/// forbidden type or does not sum to one.
LatentDistribution latent_from_types(const TypeDistribution& p, const TypeSpace& types,
                                     const BinaryRelation& rel);

struct RelationSplit {
  BinaryRelation irreflexive;
  std::vector<int> reflexive;  // treatments x with (x, x) forbidden
};

RelationSplit split_relation(const BinaryRelation& rel);

/// Every relation on the given treatment count (2^(L*L) of them; L <= 3).
std::vector<BinaryRelation> all_relations(int n_treatments);

/// Seeded random relations for spot checks at larger L.
std::vector<BinaryRelation> sample_relations(int n_treatments, int count, std::uint64_t seed);

struct LemmaCheck {
  std::string name;
  bool passed = false;
  long cases = 0;
  std::string first_failure;
};

struct LemmaReport {
  bool all_passed = false;
  std::vector<LemmaCheck> parts;
};

/// Exhaustive verification of the six support-level claims tying the
/// reversal discipline to response-type restrictions, over the given
/// relations:
///   1. the discipline only sees the irreflexive part of the relation;
///   2. each missing pair admits a compliant witness that still reverses it;
///   3. dropping a pair admits a compliant witness with mass on it;
///   4. reflexive pairs are never enforced (the constant witness);
///   5. compliant profiles never induce a forbidden non-constant response,
///      and the only leaks are the reflexive constant types;
///   6. any response distribution off the forbidden set lifts to a
///      compliant latent distribution with the same pushforward (checked
///      structurally and by seeded concrete round trips).
LemmaReport lemma_harness(int n_treatments, const std::vector<BinaryRelation>& relations,
                          std::uint64_t seed = 1);

struct MinimalityReport {
  bool all_passed = false;
  long witnesses = 0;
  std::string first_failure;
};

/// For every relation given and every proper sub-relation, exhibit a
/// witness compliant with the sub-relation whose induced response hits a
/// dropped pair: no strictly smaller ruled-out set enforces the same
/// restriction.
MinimalityReport minimality_witnesses(const std::vector<BinaryRelation>& relations);

}  // namespace ivfalsify
