#include "ivfalsify/submono.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ivfalsify/rng.hpp"

namespace ivfalsify {

namespace {

void check_ranking(const Ranking& ranking) {
  std::vector<bool> seen(ranking.size(), false);
  for (int x : ranking) {
    if (x < 0 || static_cast<std::size_t>(x) >= ranking.size() || seen[x]) {
      throw std::invalid_argument("ranking must be a permutation of the treatment indices");
    }
    seen[x] = true;
  }
  if (ranking.empty()) throw std::invalid_argument("ranking must not be empty");
}

// position[x] = rank of treatment x (0 = most preferred)
std::vector<int> positions(const Ranking& ranking) {
  std::vector<int> pos(ranking.size(), 0);
  for (std::size_t i = 0; i < ranking.size(); ++i) pos[ranking[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

std::pair<int, int> induced_response(const PreferenceProfile& profile) {
  check_ranking(profile.at_first);
  check_ranking(profile.at_second);
  if (profile.at_first.size() != profile.at_second.size()) {
    throw std::invalid_argument("profile rankings cover different treatment counts");
  }
  return {profile.at_first.front(), profile.at_second.front()};
}

bool reversal_violates(const PreferenceProfile& profile, const BinaryRelation& rel) {
  check_ranking(profile.at_first);
  check_ranking(profile.at_second);
  const int L = rel.n_treatments();
  if (static_cast<int>(profile.at_first.size()) != L ||
      static_cast<int>(profile.at_second.size()) != L) {
    throw std::invalid_argument("profile rankings do not match the relation's treatment count");
  }
  const std::vector<int> first = positions(profile.at_first);
  const std::vector<int> second = positions(profile.at_second);
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      if (a == b || !rel.forbids(a, b)) continue;
      if (first[a] < first[b] && second[b] < second[a]) return true;
    }
  }
  return false;
}

PreferenceProfile two_profile_witness(int a, int b, int n_treatments) {
  if (a < 0 || a >= n_treatments || b < 0 || b >= n_treatments) {
    throw std::invalid_argument("witness treatments outside the support");
  }
  const auto build = [n_treatments](int top, int runner_up) {
    Ranking ranking;
    ranking.push_back(top);
    if (runner_up != top) ranking.push_back(runner_up);
    for (int x = 0; x < n_treatments; ++x) {
      if (x != top && x != runner_up) ranking.push_back(x);
    }
    return ranking;
  };
  return {build(a, b), build(b, a)};
}

std::vector<Ranking> all_rankings(int n_treatments) {
  if (n_treatments < 1 || n_treatments > 8) {
    throw std::invalid_argument("ranking enumeration supports 1 to 8 treatments");
  }
  Ranking base(n_treatments);
  std::iota(base.begin(), base.end(), 0);
  std::vector<Ranking> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

TypeDistribution induced_type_distribution(const LatentDistribution& h, const TypeSpace& types) {
  if (types.n_instruments() != 2) {
    throw std::invalid_argument("latent preference profiles cover a binary instrument only");
  }
  TypeDistribution p(types.size(), Rational(0));
  Rational total(0);
  for (const auto& [profile, weight] : h) {
    if (weight < 0) throw std::invalid_argument("latent weights must be nonnegative");
    const auto [x0, x1] = induced_response(profile);
    if (static_cast<int>(profile.at_first.size()) != types.n_treatments()) {
      throw std::invalid_argument("profile rankings do not match the type space");
    }
    p[types.index_of({x0, x1})] += weight;
    total += weight;
  }
  if (total != 1) throw std::invalid_argument("latent weights must sum to one");
  return p;
}

LatentDistribution latent_from_types(const TypeDistribution& p, const TypeSpace& types,
                                     const BinaryRelation& rel) {
  if (types.n_instruments() != 2) {
    throw std::invalid_argument("latent preference profiles cover a binary instrument only");
  }
  if (static_cast<long>(p.size()) != types.size()) {
    throw std::invalid_argument("type distribution does not match the type space");
  }
  if (rel.n_treatments() != types.n_treatments()) {
    throw std::invalid_argument("relation does not match the type space");
  }
  Rational total(0);
  LatentDistribution h;
  for (long t = 0; t < types.size(); ++t) {
    if (p[t] < 0) throw std::invalid_argument("type masses must be nonnegative");
    if (p[t] == 0) continue;
    const std::vector<int> response = types.type(t);
    if (rel.forbids(response[0], response[1])) {
      throw std::invalid_argument("type distribution puts mass on a forbidden type");
    }
    h.emplace_back(two_profile_witness(response[0], response[1], types.n_treatments()), p[t]);
    total += p[t];
  }
  if (total != 1) throw std::invalid_argument("type masses must sum to one");
  return h;
}

RelationSplit split_relation(const BinaryRelation& rel) {
  const int L = rel.n_treatments();
  RelationSplit split{BinaryRelation(L), {}};
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      if (!rel.forbids(a, b)) continue;
      if (a == b) {
        split.reflexive.push_back(a);
      } else {
        split.irreflexive.forbid(a, b);
      }
    }
  }
  return split;
}

std::vector<BinaryRelation> all_relations(int n_treatments) {
  if (n_treatments < 1 || n_treatments > 3) {
    throw std::invalid_argument("full relation enumeration supports 1 to 3 treatments");
  }
  const int bits = n_treatments * n_treatments;
  std::vector<BinaryRelation> out;
  out.reserve(1u << bits);
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    BinaryRelation rel(n_treatments);
    for (int a = 0; a < n_treatments; ++a) {
      for (int b = 0; b < n_treatments; ++b) {
        if (mask & (1u << (a * n_treatments + b))) rel.forbid(a, b);
      }
    }
    out.push_back(rel);
  }
  return out;
}

std::vector<BinaryRelation> sample_relations(int n_treatments, int count, std::uint64_t seed) {
  if (n_treatments < 1 || n_treatments > 5) {
    throw std::invalid_argument("relation sampling supports 1 to 5 treatments");
  }
  SplitMix64 rng(seed);
  std::vector<BinaryRelation> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    BinaryRelation rel(n_treatments);
    for (int a = 0; a < n_treatments; ++a) {
      for (int b = 0; b < n_treatments; ++b) {
        if (rng.chance(1, 2)) rel.forbid(a, b);
      }
    }
    out.push_back(rel);
  }
  return out;
}

namespace {

std::string describe_relation(const BinaryRelation& rel) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [a, b] : rel.pairs()) {
    if (!first) os << ", ";
    os << "(" << a << "," << b << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

struct CheckState {
  LemmaCheck check;

  void record(bool ok, const std::string& detail) {
    ++check.cases;
    if (!ok && check.passed) {
      check.passed = false;
      check.first_failure = detail;
    }
  }
};

}  // namespace

LemmaReport lemma_harness(int n_treatments, const std::vector<BinaryRelation>& relations,
                          std::uint64_t seed) {
  if (relations.empty()) throw std::invalid_argument("no relations to check");
  const int L = n_treatments;
  for (const auto& rel : relations) {
    if (rel.n_treatments() != L) {
      throw std::invalid_argument("relation does not match the treatment count");
    }
  }
  const std::vector<Ranking> rankings = all_rankings(L);
  const TypeSpace types(L, 2);
  SplitMix64 rng(seed);

  CheckState p1{{"irreflexive part carries the discipline", true, 0, ""}};
  CheckState p2{{"missing pairs admit compliant reversing witnesses", true, 0, ""}};
  CheckState p3{{"dropped pairs admit compliant mass on them", true, 0, ""}};
  CheckState p4{{"reflexive pairs are never enforced", true, 0, ""}};
  CheckState p5{{"compliant profiles avoid forbidden switches", true, 0, ""}};
  CheckState p6{{"allowed distributions lift to compliant latents", true, 0, ""}};

  for (const auto& rel : relations) {
    const std::string rel_tag = describe_relation(rel);
    const RelationSplit split = split_relation(rel);

    // Part 1: a profile reverses against the relation iff it reverses
    // against the irreflexive part, for every profile.
    for (const Ranking& r0 : rankings) {
      for (const Ranking& r1 : rankings) {
        const PreferenceProfile profile{r0, r1};
        const bool full = reversal_violates(profile, rel);
        const bool irr = reversal_violates(profile, split.irreflexive);
        p1.record(full == irr, "mismatch for relation " + rel_tag);
      }
    }

    // Part 2: for each non-forbidden a != b, the canonical witness complies
    // with the relation, induces exactly (a, b) (off the forbidden set), yet
    // reverses (a, b) — so any larger discipline containing that pair
    // excludes a distribution this one admits.
    for (int a = 0; a < L; ++a) {
      for (int b = 0; b < L; ++b) {
        if (a == b || rel.forbids(a, b)) continue;
        const PreferenceProfile w = two_profile_witness(a, b, L);
        BinaryRelation just_pair(L);
        just_pair.forbid(a, b);
        const bool ok = !reversal_violates(w, rel) && induced_response(w) == std::pair{a, b} &&
                        reversal_violates(w, just_pair);
        p2.record(ok, "witness failed for relation " + rel_tag + " pair (" + std::to_string(a) +
                          "," + std::to_string(b) + ")");
      }
    }

    // Part 3: for each forbidden a != b, dropping that pair admits a
    // compliant witness whose induced response is exactly the dropped pair.
    for (const auto& [a, b] : rel.pairs()) {
      if (a == b) continue;
      BinaryRelation weaker(L);
      for (const auto& [c, d] : rel.pairs()) {
        if (c != a || d != b) weaker.forbid(c, d);
      }
      const PreferenceProfile w = two_profile_witness(a, b, L);
      const bool ok = !reversal_violates(w, weaker) && induced_response(w) == std::pair{a, b};
      p3.record(ok, "drop witness failed for relation " + rel_tag + " pair (" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
    }

    // Part 4: a constant profile reverses nothing, so when (a, a) is
    // forbidden the discipline still admits mass on it; only the separate
    // no-constant-takers condition can remove it.
    for (int a = 0; a < L; ++a) {
      if (!rel.forbids(a, a)) continue;
      const PreferenceProfile c = two_profile_witness(a, a, L);
      const bool ok = !reversal_violates(c, rel) && induced_response(c) == std::pair{a, a};
      p4.record(ok, "constant witness failed for relation " + rel_tag + " treatment " +
                        std::to_string(a));
    }

    // Part 5: a compliant profile never induces a forbidden response with
    // distinct treatments; the only forbidden responses reachable are the
    // reflexive ones the no-constant-takers condition targets.
    for (const Ranking& r0 : rankings) {
      for (const Ranking& r1 : rankings) {
        const PreferenceProfile profile{r0, r1};
        if (reversal_violates(profile, rel)) continue;
        const auto [x0, x1] = induced_response(profile);
        const bool ok = !rel.forbids(x0, x1) || x0 == x1;
        p5.record(ok, "compliant profile reaches forbidden (" + std::to_string(x0) + "," +
                          std::to_string(x1) + ") under " + rel_tag);
      }
    }

    // Part 6, structural: each allowed response has a compliant witness
    // inducing it, and distinct responses get distinct witnesses, so any
    // distribution off the forbidden set lifts with the same pushforward.
    {
      std::vector<PreferenceProfile> witnesses;
      bool ok = true;
      for (int a = 0; a < L && ok; ++a) {
        for (int b = 0; b < L && ok; ++b) {
          if (rel.forbids(a, b)) continue;
          const PreferenceProfile w = two_profile_witness(a, b, L);
          ok = !reversal_violates(w, rel) && induced_response(w) == std::pair{a, b} &&
               std::find(witnesses.begin(), witnesses.end(), w) == witnesses.end();
          witnesses.push_back(w);
        }
      }
      p6.record(ok, "structural lift failed for relation " + rel_tag);
    }

    // Part 6, concrete: a random distribution over the allowed responses
    // round-trips through the lift exactly.
    {
      std::vector<long> allowed;
      for (long t = 0; t < types.size(); ++t) {
        const std::vector<int> response = types.type(t);
        if (!rel.forbids(response[0], response[1])) allowed.push_back(t);
      }
      if (!allowed.empty()) {
        TypeDistribution p(types.size(), Rational(0));
        Rational total(0);
        for (long t : allowed) {
          p[t] = Rational(static_cast<long>(1 + rng.below(8)));
          total += p[t];
        }
        for (long t : allowed) p[t] /= total;
        bool ok = true;
        std::string detail;
        try {
          const LatentDistribution h = latent_from_types(p, types, rel);
          for (const auto& [profile, weight] : h) {
            if (reversal_violates(profile, rel)) ok = false;
          }
          if (induced_type_distribution(h, types) != p) ok = false;
          if (!ok) detail = "round trip failed for relation " + rel_tag;
        } catch (const std::exception& err) {
          ok = false;
          detail = std::string("lift threw for relation ") + rel_tag + ": " + err.what();
        }
        p6.record(ok, detail);
      }
    }
  }

  LemmaReport report;
  report.parts = {p1.check, p2.check, p3.check, p4.check, p5.check, p6.check};
  report.all_passed = std::all_of(report.parts.begin(), report.parts.end(),
                                  [](const LemmaCheck& c) { return c.passed; });
  return report;
}

MinimalityReport minimality_witnesses(const std::vector<BinaryRelation>& relations) {
  MinimalityReport report;
  report.all_passed = true;
  for (const auto& rel : relations) {
    const int L = rel.n_treatments();
    const std::vector<std::pair<int, int>> pairs = rel.pairs();
    const int n = static_cast<int>(pairs.size());
    if (n == 0 || n > 20) {
      if (n > 20) throw std::invalid_argument("relation too large for subset sweep");
      continue;
    }
    // Every proper subset of the ruled-out pairs, including the empty one.
    for (unsigned keep = 0; keep + 1 < (1u << n); ++keep) {
      BinaryRelation weaker(L);
      for (int i = 0; i < n; ++i) {
        if (keep & (1u << i)) weaker.forbid(pairs[i].first, pairs[i].second);
      }
      for (int i = 0; i < n; ++i) {
        if (keep & (1u << i)) continue;
        const auto [a, b] = pairs[i];
        const PreferenceProfile w = two_profile_witness(a, b, L);
        const bool ok = !reversal_violates(w, weaker) && induced_response(w) == std::pair{a, b};
        ++report.witnesses;
        if (!ok && report.all_passed) {
          report.all_passed = false;
          report.first_failure = "no witness for pair (" + std::to_string(a) + "," +
                                 std::to_string(b) + ") dropped from " + describe_relation(rel);
        }
      }
    }
  }
  return report;
}

}  // namespace ivfalsify
