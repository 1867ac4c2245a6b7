#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "fixtures.hpp"
#include "ivfalsify/typespace.hpp"

using namespace ivfalsify;
using testfix::worked_law;
using testfix::worked_support;

TEST_CASE("types enumerate lexicographically, first instrument most significant") {
  TypeSpace types(3, 2);
  CHECK(types.size() == 9);
  CHECK(types.type(0) == std::vector<int>{0, 0});
  CHECK(types.type(5) == std::vector<int>{1, 2});
  CHECK(types.type(8) == std::vector<int>{2, 2});
  CHECK(types.index_of({1, 2}) == 5);
  for (long t = 0; t < types.size(); ++t) CHECK(types.index_of(types.type(t)) == t);
  CHECK(types.describe(5, worked_support()) == "(x1,x2)");

  CHECK_THROWS_AS(types.type(9), std::invalid_argument);
  CHECK_THROWS_AS(types.index_of({0}), std::invalid_argument);
  CHECK_THROWS_AS(types.index_of({0, 3}), std::invalid_argument);
}

TEST_CASE("type space cap guards L^K blowup") {
  CHECK_THROWS_WITH_AS(TypeSpace(2, 13), doctest::Contains("exceeds the cap"),
                       std::invalid_argument);
  CHECK(TypeSpace(2, 13, 10000).size() == 8192);
  CHECK(TypeSpace(4, 6).size() == 4096);  // exactly at the default cap
}

TEST_CASE("presets expand to the documented ruled-out sets") {
  Support s = worked_support();

  SUBCASE("none") {
    CHECK(make_restriction(Preset::none, s).ruled_out.empty());
  }
  SUBCASE("ordered-monotone, three treatments") {
    auto spec = make_restriction(Preset::ordered_monotone, s);
    std::vector<std::vector<int>> expected = {{1, 0}, {2, 0}, {2, 1}};
    CHECK(spec.ruled_out == expected);
  }
  SUBCASE("no-defiers needs binary supports") {
    CHECK_THROWS_AS(make_restriction(Preset::no_defiers, s), std::invalid_argument);
    Support binary = s;
    binary.treatments = {"x0", "x1"};
    auto spec = make_restriction(Preset::no_defiers, binary);
    CHECK(spec.ruled_out == std::vector<std::vector<int>>{{1, 0}});
  }
  SUBCASE("unordered-monotone keeps stays and complement-to-promoted switches") {
    auto spec = make_restriction(Preset::unordered_monotone, s, {1});
    std::vector<std::vector<int>> expected = {{0, 2}, {1, 0}, {1, 2}, {2, 0}};
    CHECK(spec.ruled_out == expected);
    CHECK_THROWS_AS(make_restriction(Preset::unordered_monotone, s), std::invalid_argument);
  }
  SUBCASE("ordered-monotone with three instruments keeps weakly increasing vectors") {
    Support s3 = s;
    s3.instruments = {"z0", "z1", "z2"};
    auto spec = make_restriction(Preset::ordered_monotone, s3);
    CHECK(spec.ruled_out.size() == 17);  // 27 vectors minus C(5,3)=10 weakly increasing
    for (const auto& response : spec.ruled_out) {
      CHECK_FALSE(std::is_sorted(response.begin(), response.end()));
    }
  }
}

TEST_CASE("preset expansion is idempotent") {
  Support s = worked_support();
  auto once = make_restriction(Preset::ordered_monotone, s);
  auto again = make_restriction(Preset::custom, s, {}, once.ruled_out);
  CHECK(again.ruled_out == once.ruled_out);
}

TEST_CASE("consistency system lays out rows per (instrument, treatment) plus adding-up") {
  auto d = worked_law();
  TypeSpace types(3, 2);
  auto system = build_consistency_system(d, types);
  CHECK(system.n_vars == 9);
  REQUIRE(system.rows.size() == 7);
  std::vector<Rational> rhs = {Rational(1, 2), Rational(1, 4), Rational(1, 4),
                               Rational(0),    Rational(1, 2), Rational(1, 2), Rational(1)};
  for (size_t i = 0; i < system.rows.size(); ++i) {
    CHECK(system.rows[i].rhs == rhs[i]);
    CHECK(system.rows[i].sense == RowSense::eq);
  }
  CHECK(system.rows[1].label == "consistency z0:x1");
  // Row (z0, x1) selects exactly the types whose first digit is x1.
  for (long t = 0; t < 9; ++t) {
    CHECK(system.rows[1].coeffs[t] == Rational(types.type(t)[0] == 1 ? 1 : 0));
  }
  // Row (z1, x0) selects second-digit x0.
  for (long t = 0; t < 9; ++t) {
    CHECK(system.rows[3].coeffs[t] == Rational(types.type(t)[1] == 0 ? 1 : 0));
  }
  CHECK(system.rows[6].kind == RowKind::adding_up);
}

TEST_CASE("restriction rows pin ruled-out types to zero and pass extra rows through") {
  Support s = worked_support();
  TypeSpace types(3, 2);
  RestrictionSpec spec = make_restriction(Preset::none, s);
  spec.ruled_out = {{1, 0}};
  // "More switches into x1 than out of it": p(x1,x0) - p(x0,x1) <= 0.
  spec.extra_rows.push_back({{{{1, 0}, Rational(1)}, {{0, 1}, Rational(-1)}}, Rational(0),
                             "defiers-bounded-by-compliers"});
  auto rows = build_restriction_rows(types, s, spec);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].label == "forbid (x1,x0)");
  CHECK(rows[0].coeffs[types.index_of({1, 0})] == Rational(1));
  CHECK(rows[0].rhs == Rational(0));
  CHECK(rows[0].sense == RowSense::le);
  CHECK(rows[1].coeffs[types.index_of({1, 0})] == Rational(-1));
  CHECK(rows[2].coeffs[types.index_of({1, 0})] == Rational(1));
  CHECK(rows[2].coeffs[types.index_of({0, 1})] == Rational(-1));
  CHECK(rows[2].kind == RowKind::extra);
  CHECK(rows[2].label == "defiers-bounded-by-compliers");
}

TEST_CASE("always-taker ceilings use the worked-example overlaps") {
  auto d = worked_law();
  TypeSpace types(3, 2);
  auto rows = build_always_taker_rows(d, types);
  REQUIRE(rows.size() == 3);
  std::vector<Rational> rhs = {Rational(0), Rational(1, 4), Rational(1, 4)};
  for (int x = 0; x < 3; ++x) {
    CHECK(rows[x].rhs == rhs[x]);
    CHECK(rows[x].coeffs[types.index_of({x, x})] == Rational(1));
    Rational off_diagonal = 0;
    for (long t = 0; t < types.size(); ++t) {
      if (t != types.index_of({x, x})) off_diagonal += abs(rows[x].coeffs[t]);
    }
    CHECK(off_diagonal == Rational(0));
    CHECK(rows[x].kind == RowKind::always_taker);
  }

  Support s3 = worked_support();
  s3.instruments = {"z0", "z1", "z2"};
  std::vector<Cell> cells = {{0, 0, 0, Rational(1)}, {1, 0, 0, Rational(1)}, {2, 0, 0, Rational(1)}};
  auto d3 = ObservedDistribution::from_cells(s3, cells);
  CHECK_THROWS_AS(build_always_taker_rows(d3, TypeSpace(3, 3)), std::invalid_argument);
}

TEST_CASE("binary-instrument sufficient-taker rows coincide with always-taker rows") {
  auto d = worked_law();
  TypeSpace types(3, 2);
  auto at_rows = build_always_taker_rows(d, types);
  auto st_rows = build_sufficient_taker_rows(d, types, build_psi_table(d, 2));
  REQUIRE(st_rows.size() == at_rows.size());
  for (size_t i = 0; i < st_rows.size(); ++i) {
    CHECK(st_rows[i].coeffs == at_rows[i].coeffs);
    CHECK(st_rows[i].rhs == at_rows[i].rhs);
    CHECK(st_rows[i].sense == RowSense::le);
  }
}

TEST_CASE("three-instrument sufficient-taker rows select the right types") {
  Support s;
  s.outcome_bins = {{"b0", {}, {}}};
  s.treatments = {"x0", "x1"};
  s.instruments = {"z0", "z1", "z2"};
  std::vector<Cell> cells = {
      {0, 0, 0, Rational(1, 2)}, {0, 1, 0, Rational(1, 2)},
      {1, 0, 0, Rational(1, 3)}, {1, 1, 0, Rational(2, 3)},
      {2, 0, 0, Rational(1, 4)}, {2, 1, 0, Rational(3, 4)},
  };
  auto d = ObservedDistribution::from_cells(s, cells);
  TypeSpace types(2, 3);
  auto rows = build_sufficient_taker_rows(d, types, build_psi_table(d, 3));
  REQUIRE(rows.size() == 8);  // 2 treatments x 4 subsets

  // Row for (x0, {z0,z1}): types with digits z0=0 and z1=0, any z2.
  const auto& row = rows[0];
  CHECK(row.label == "sufficient-taker x0 {z0,z1}");
  CHECK(row.rhs == Rational(1, 3));  // min(1/2, 1/3) on the only bin
  for (long t = 0; t < types.size(); ++t) {
    auto response = types.type(t);
    CHECK(row.coeffs[t] == Rational(response[0] == 0 && response[1] == 0 ? 1 : 0));
  }
  // Full-subset row for x1: min(1/2, 2/3, 3/4) = 1/2 on the constant type.
  const auto& full = rows[7];
  CHECK(full.label == "sufficient-taker x1 {z0,z1,z2}");
  CHECK(full.rhs == Rational(1, 2));
  CHECK(full.coeffs[types.index_of({1, 1, 1})] == Rational(1));
}
