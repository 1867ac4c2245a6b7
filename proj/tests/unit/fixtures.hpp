#pragma once

// Shared worked-example law used across the unit suites: three ordered
// treatments, two outcome bins, binary instrument.
//
//   z0:  (x0, y0) -> 1/2   (x1, y1) -> 1/4   (x2, y1) -> 1/4
//   z1:  (x1, y1) -> 1/2   (x2, y1) -> 1/2
//
// Known exact quantities (hand-derived once, frozen here):
//   cond_treatment:      z0 = (1/2, 1/4, 1/4),  z1 = (0, 1/2, 1/2)
//   overlap minima (psi): x0 -> 0, x1 -> 1/4, x2 -> 1/4
//   binarized at x2:     z0 = (3/4, 1/4), z1 = (1/2, 1/2), psi = (1/4, 1/4)

#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/rational.hpp"

namespace ivfalsify::testfix {

inline Support worked_support() {
  Support s;
  s.outcome_bins = {{"y0", {}, {}}, {"y1", {}, {}}};
  s.treatments = {"x0", "x1", "x2"};
  s.instruments = {"z0", "z1"};
  s.treatments_ordered = true;
  return s;
}

inline ObservedDistribution worked_law() {
  const Rational half(1, 2), quarter(1, 4);
  std::vector<Cell> cells = {
      {0, 0, 0, half}, {0, 1, 1, quarter}, {0, 2, 1, quarter},
      {1, 1, 1, half}, {1, 2, 1, half},
  };
  return ObservedDistribution::from_cells(worked_support(), cells);
}

}  // namespace ivfalsify::testfix
