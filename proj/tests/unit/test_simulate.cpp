#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "ivfalsify/feasibility.hpp"
#include "ivfalsify/psi.hpp"
#include "ivfalsify/simulate.hpp"

using namespace ivfalsify;

namespace {

// Binary-instrument validity system: consistency, ruled-out types, and
// always-taker ceilings.
LinearSystem full_binary_system(const ObservedDistribution& d, const RestrictionSpec& restriction) {
  const TypeSpace types(d.support().n_treatments(), 2);
  const RestrictionSpec expanded =
      make_restriction(restriction.preset, d.support(), restriction.promoted,
                       restriction.ruled_out, restriction.extra_rows);
  LinearSystem system = build_consistency_system(d, types);
  for (const Row& row : build_restriction_rows(types, d.support(), expanded)) {
    system.append(row);
  }
  for (const Row& row : build_always_taker_rows(d, types)) system.append(row);
  return system;
}

}  // namespace

TEST_CASE("the worked process generates exactly the fixture law") {
  const DGPSpec dgp = worked_example_dgp();
  const ObservedDistribution d = generate_observed(dgp);
  const ObservedDistribution fixture = testfix::worked_law();

  REQUIRE(d.support().treatments == fixture.support().treatments);
  const auto cells = d.to_cells();
  const auto expected = fixture.to_cells();
  REQUIRE(cells.size() == expected.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].instrument == expected[i].instrument);
    CHECK(cells[i].treatment == expected[i].treatment);
    CHECK(cells[i].bin == expected[i].bin);
    CHECK(cells[i].mass == expected[i].mass);
  }

  CHECK(d.cond_treatment(0, 0) == parse_rational("1/2"));
  CHECK(d.cond_treatment(1, 0) == 0);
}

TEST_CASE("a single constant stratum yields a degenerate law") {
  DGPSpec dgp;
  dgp.support = Support{{{"b", {}, {}}}, {"only"}, {"z0", "z1"}, false};
  dgp.type_table = {{{0, 0}, {0}, Rational(1)}};
  dgp.instrument_law = {parse_rational("1/2"), parse_rational("1/2")};
  const ObservedDistribution d = generate_observed(dgp);
  CHECK(d.mass(0, 0, 0) == 1);
  CHECK(d.mass(1, 0, 0) == 1);
}

TEST_CASE("process validation rejects malformed specs") {
  DGPSpec dgp = worked_example_dgp();
  dgp.type_table[0].weight = parse_rational("1/4");
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("sum to one"), std::invalid_argument);

  dgp = worked_example_dgp();
  dgp.type_table[1].response = {1, 3};
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("outside the support"), std::invalid_argument);

  dgp = worked_example_dgp();
  dgp.type_table[1].outcome_bins = {0, 1};
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("per treatment"), std::invalid_argument);

  dgp = worked_example_dgp();
  dgp.exclusion_break[{3, 0}] = 0;
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("keyed outside"), std::invalid_argument);

  dgp = worked_example_dgp();
  dgp.instrument_law = {parse_rational("1/2"), parse_rational("1/3")};
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("sum to one"), std::invalid_argument);

  dgp = worked_example_dgp();
  dgp.per_instrument_tables = {dgp.type_table};
  CHECK_THROWS_WITH_AS(static_cast<void>(generate_observed(dgp)),
                       doctest::Contains("every instrument"), std::invalid_argument);
}

TEST_CASE("an outcome-exclusion break at x1 is invisible to the validity system") {
  DGPSpec dgp = worked_example_dgp();
  dgp.exclusion_break[{1, 1}] = 0;  // treated-by-x1 units report y0 when z = z1
  const ObservedDistribution d = generate_observed(dgp);

  // Treatment shares are untouched; only the x1 overlap collapses.
  CHECK(d.mass(1, 1, 0) == parse_rational("1/2"));
  CHECK(d.mass(1, 1, 1) == 0);
  CHECK(d.cond_treatment(1, 1) == parse_rational("1/2"));
  CHECK(psi_mass(d, 1, {0, 1}) == 0);
  CHECK(psi_mass(d, 2, {0, 1}) == parse_rational("1/4"));

  const RestrictionSpec monotone = make_restriction(Preset::ordered_monotone, d.support());
  const FeasibilityResult result = solve_feasibility(full_binary_system(d, monotone));
  CHECK(result.feasible);
}

TEST_CASE("an outcome-exclusion break at x2 falsifies the validity system") {
  DGPSpec dgp = worked_example_dgp();
  dgp.exclusion_break[{2, 1}] = 0;  // treated-by-x2 units report y0 when z = z1
  const ObservedDistribution d = generate_observed(dgp);

  CHECK(d.mass(1, 2, 0) == parse_rational("1/2"));
  CHECK(psi_mass(d, 2, {0, 1}) == 0);

  const RestrictionSpec monotone = make_restriction(Preset::ordered_monotone, d.support());
  const LinearSystem system = full_binary_system(d, monotone);
  const FeasibilityResult result = solve_feasibility(system);
  REQUIRE_FALSE(result.feasible);
  REQUIRE(result.certificate.has_value());
  CHECK(verify_certificate(system, *result.certificate));
}

TEST_CASE("independence violations are expressible through per-instrument tables") {
  DGPSpec dgp;
  dgp.support = Support{{{"y0", {}, {}}, {"y1", {}, {}}}, {"x0", "x1"}, {"z0", "z1"}, true};
  dgp.instrument_law = {parse_rational("1/2"), parse_rational("1/2")};
  // The population "changes composition" with the instrument.
  dgp.per_instrument_tables = {
      {{{0, 0}, {0, 0}, Rational(1)}},
      {{{1, 1}, {0, 1}, Rational(1)}},
  };
  const ObservedDistribution d = generate_observed(dgp);
  CHECK(d.mass(0, 0, 0) == 1);
  CHECK(d.mass(1, 1, 1) == 1);
}

TEST_CASE("the seeded generator is deterministic and respects its restriction") {
  const RestrictionSpec monotone{Preset::ordered_monotone, {}, {}, {}};
  const DGPSpec a = random_valid_dgp(42, 3, 2, 2, monotone);
  const DGPSpec b = random_valid_dgp(42, 3, 2, 2, monotone);

  REQUIRE(a.type_table.size() == b.type_table.size());
  for (std::size_t i = 0; i < a.type_table.size(); ++i) {
    CHECK(a.type_table[i].response == b.type_table[i].response);
    CHECK(a.type_table[i].outcome_bins == b.type_table[i].outcome_bins);
    CHECK(a.type_table[i].weight == b.type_table[i].weight);
  }
  CHECK(a.instrument_law == b.instrument_law);

  for (const DGPType& stratum : a.type_table) {
    CHECK(std::is_sorted(stratum.response.begin(), stratum.response.end()));
  }
  CHECK(a.type_table.size() == 6);  // weakly increasing pairs over three treatments

  RestrictionSpec with_extra = monotone;
  with_extra.extra_rows.push_back({{{{0, 1}, Rational(1)}}, Rational(0), "cap"});
  CHECK_THROWS_WITH_AS(static_cast<void>(random_valid_dgp(1, 2, 2, 2, with_extra)),
                       doctest::Contains("extra"), std::invalid_argument);
}

TEST_CASE("laws generated as valid stay feasible under the full system") {
  const RestrictionSpec monotone{Preset::ordered_monotone, {}, {}, {}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DGPSpec dgp = random_valid_dgp(seed, 3, 2, 2, monotone);
    const ObservedDistribution d = generate_observed(dgp);
    const FeasibilityResult result = solve_feasibility(full_binary_system(d, monotone));
    INFO("seed ", seed);
    CHECK(result.feasible);
  }
}

TEST_CASE("record realization reproduces the law exactly") {
  const ObservedDistribution d = testfix::worked_law();
  const std::vector<Rational> law = {parse_rational("1/2"), parse_rational("1/2")};
  const std::vector<Record> records = records_realizing(d, law);
  CHECK(records.size() == 8);  // joint masses share denominator 8

  const ObservedDistribution back = ObservedDistribution::from_records(d.support(), records);
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 3; ++x) {
      for (int b = 0; b < 2; ++b) CHECK(back.mass(z, x, b) == d.mass(z, x, b));
    }
  }

  CHECK_THROWS_WITH_AS(static_cast<void>(records_realizing(d, law, 4)),
                       doctest::Contains("more than 4 rows"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      static_cast<void>(records_realizing(d, {Rational(1), Rational(0)})),
      doctest::Contains("positive instrument weights"), std::invalid_argument);
}

TEST_CASE("record realization emits numeric outcomes for numeric bins") {
  Support support{
      {{"low", Rational(0), Rational(1)}, {"high", Rational(1), Rational(2)}},
      {"x0", "x1"},
      {"z0", "z1"},
      true,
  };
  const std::vector<Cell> cells = {
      {0, 0, 0, parse_rational("1/2")},
      {0, 1, 1, parse_rational("1/2")},
      {1, 1, 1, Rational(1)},
  };
  const ObservedDistribution d = ObservedDistribution::from_cells(support, cells);
  const std::vector<Record> records =
      records_realizing(d, {parse_rational("1/2"), parse_rational("1/2")});
  for (const Record& record : records) {
    CHECK((record.y == "0/1" || record.y == "1/1"));
  }
  const ObservedDistribution back = ObservedDistribution::from_records(support, records);
  CHECK(back.mass(0, 0, 0) == parse_rational("1/2"));
  CHECK(back.mass(1, 1, 1) == 1);
}
