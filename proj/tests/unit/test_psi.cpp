#include <doctest.h>

#include <stdexcept>

#include "fixtures.hpp"
#include "ivfalsify/psi.hpp"
#include "ivfalsify/rng.hpp"

using namespace ivfalsify;
using testfix::worked_law;

TEST_CASE("overlap minima on the worked example") {
  auto d = worked_law();
  CHECK(pointwise_min(d, 0, {0, 1}) == std::vector<Rational>{Rational(0), Rational(0)});
  CHECK(pointwise_min(d, 1, {0, 1}) == std::vector<Rational>{Rational(0), Rational(1, 4)});
  CHECK(psi_mass(d, 0, {0, 1}) == Rational(0));
  CHECK(psi_mass(d, 1, {0, 1}) == Rational(1, 4));
  CHECK(psi_mass(d, 2, {0, 1}) == Rational(1, 4));

  auto b = d.binarize(2);
  CHECK(psi_mass(b, 0, {0, 1}) == Rational(1, 4));
  CHECK(psi_mass(b, 1, {0, 1}) == Rational(1, 4));
}

TEST_CASE("overlap subset arguments are validated") {
  auto d = worked_law();
  CHECK_THROWS_AS(pointwise_min(d, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_min(d, 0, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_min(d, 0, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_min(d, 0, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_min(d, 5, {0, 1}), std::invalid_argument);
}

namespace {

// Three-instrument law used by the table tests: one treatment per z slice
// spreads its mass over two bins differently per instrument.
ObservedDistribution three_instrument_law() {
  Support s;
  s.outcome_bins = {{"b0", {}, {}}, {"b1", {}, {}}};
  s.treatments = {"x0", "x1"};
  s.instruments = {"z0", "z1", "z2"};
  std::vector<Cell> cells = {
      {0, 0, 0, Rational(1, 2)}, {0, 1, 1, Rational(1, 2)},
      {1, 0, 0, Rational(1, 4)}, {1, 0, 1, Rational(1, 4)}, {1, 1, 1, Rational(1, 2)},
      {2, 0, 1, Rational(3, 4)}, {2, 1, 0, Rational(1, 4)},
  };
  return ObservedDistribution::from_cells(s, cells);
}

}  // namespace

TEST_CASE("table enumerates subsets by size then lexicographically") {
  auto d = three_instrument_law();
  auto table = build_psi_table(d, 3);
  std::vector<std::vector<int>> expected = {{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  REQUIRE(table.entries().size() == 8);  // 4 subsets x 2 treatments
  for (int x = 0; x < 2; ++x) {
    for (int i = 0; i < 4; ++i) {
      const auto& e = table.entries()[x * 4 + i];
      CHECK(e.treatment == x);
      CHECK(e.instruments == expected[i]);
    }
  }

  // Hand-derived overlaps for x0: phi slices are (1/2,0), (1/4,1/4), (0,3/4).
  CHECK(table.at(0, {0, 1}).total == Rational(1, 4));
  CHECK(table.at(0, {0, 2}).total == Rational(0));
  CHECK(table.at(0, {1, 2}).total == Rational(1, 4));
  CHECK(table.at(0, {0, 1, 2}).total == Rational(0));
  CHECK_THROWS_AS(table.at(0, {0}), std::invalid_argument);
}

TEST_CASE("widening the instrument subset never increases the overlap") {
  auto d = three_instrument_law();
  auto table = build_psi_table(d, 3);
  for (int x = 0; x < 2; ++x) {
    const Rational full = table.at(x, {0, 1, 2}).total;
    for (auto& pair : {std::vector<int>{0, 1}, {0, 2}, {1, 2}}) {
      CHECK(full <= table.at(x, pair).total);
    }
  }
}

TEST_CASE("table caps refuse oversized enumerations") {
  auto d = three_instrument_law();
  CHECK_THROWS_AS(build_psi_table(d, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_psi_table(d, 4), std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_psi_table(d, 3, 2), doctest::Contains("exceeds the cap"),
                       std::invalid_argument);

  Support wide;
  wide.outcome_bins = {{"b0", {}, {}}};
  wide.treatments = {"x0"};
  for (int z = 0; z < 13; ++z) wide.instruments.push_back("z" + std::to_string(z));
  std::vector<Cell> cells;
  for (int z = 0; z < 13; ++z) cells.push_back({z, 0, 0, Rational(1)});
  auto many = ObservedDistribution::from_cells(wide, cells);
  CHECK_THROWS_WITH_AS(build_psi_table(many, 2), doctest::Contains("more than 12"),
                       std::invalid_argument);
}

TEST_CASE("overlap equals the dual bin-subset sweep on random binary-instrument laws") {
  // For any treatment x: max over bin sets A of (P[A,x|z0] - P[A,x|z1])
  // equals P[x|z0] minus the overlap mass. Brute-forced over all 2^B sets.
  SplitMix64 rng(20260814);
  for (int trial = 0; trial < 60; ++trial) {
    const int B = 2 + static_cast<int>(rng.below(5));
    Support s;
    for (int b = 0; b < B; ++b) s.outcome_bins.push_back({"b" + std::to_string(b), {}, {}});
    s.treatments = {"x0", "x1"};
    s.instruments = {"z0", "z1"};

    const long denom = 24;
    std::vector<Cell> cells;
    for (int z = 0; z < 2; ++z) {
      std::vector<long> raw(2 * B);
      long total = 0;
      for (auto& v : raw) total += (v = static_cast<long>(rng.below(7)));
      if (total == 0) { raw[0] = 1; total = 1; }
      for (int x = 0; x < 2; ++x)
        for (int b = 0; b < B; ++b)
          cells.push_back({z, x, b, Rational(raw[x * B + b], 1) / total * Rational(1)});
    }
    // Normalize exactly: masses are raw/total per z, already summing to one.
    auto d = ObservedDistribution::from_cells(s, cells);
    (void)denom;

    for (int x = 0; x < 2; ++x) {
      Rational best = 0;  // empty bin set
      for (unsigned mask = 1; mask < (1u << B); ++mask) {
        Rational gap = 0;
        for (int b = 0; b < B; ++b) {
          if (mask & (1u << b)) gap += d.mass(0, x, b) - d.mass(1, x, b);
        }
        best = std::max(best, gap);
      }
      CHECK(best == d.cond_treatment(0, x) - psi_mass(d, x, {0, 1}));
    }
  }
}
