#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivfalsify/rational.hpp"

namespace ivfalsify {

enum class RowSense { eq, le };

/// Provenance tag for a system row, used when reporting which assumption a
/// refutation certificate leans on.
enum class RowKind { consistency, adding_up, restriction, always_taker, sufficient_taker, extra };

const char* row_kind_name(RowKind kind);

/// One linear row over a nonnegative variable vector: coeffs . p (= | <=) rhs.
struct Row {
  std::vector<Rational> coeffs;
  Rational rhs;
  RowSense sense = RowSense::eq;
  RowKind kind = RowKind::extra;
  std::string label;
};

/// A system { A p = / <= b, p >= 0 } with labeled rows.
struct LinearSystem {
  int n_vars = 0;
  std::vector<Row> rows;

  void append(Row row);
  void append(std::vector<Row> more);

  /// Exact check of every row plus nonnegativity.
  bool satisfied_by(const std::vector<Rational>& p) const;
};

/// Farkas-style refutation: nonnegative weights on <= rows and free weights
/// on = rows whose combination proves emptiness (weighted coefficient sums
/// all >= 0 while the weighted rhs is < 0). `violated_labels` lists the rows
/// that carry nonzero weight, i.e. the assumptions the refutation uses.
struct FarkasCertificate {
  std::vector<Rational> weights;  // one per row, in system order
  std::vector<std::string> violated_labels;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> witness;               // set when feasible
  std::optional<FarkasCertificate> certificate;  // set when infeasible
};

/// Exact phase-1 simplex with Bland's rule. Every answer is certified before
/// it is returned: a witness must satisfy the system, a certificate must
/// pass verify_certificate.
FeasibilityResult solve_feasibility(const LinearSystem& system);

/// Re-derives the certificate's validity from the raw system: weight signs,
/// componentwise nonnegativity of the combined coefficients, and a negative
/// combined rhs. Independent of the solver's internal state.
bool verify_certificate(const LinearSystem& system, const FarkasCertificate& cert);

enum class OracleVerdict { feasible, infeasible, unknown };

const char* oracle_verdict_name(OracleVerdict verdict);

/// Slow, independent referee for small systems. "feasible" comes only from
/// an exhaustive sweep of simplex grid points with the given denominator;
/// "infeasible" only from a complete basic-solution enumeration in which
/// every candidate point violates some row; anything short of either proof
/// (including blowing the enumeration caps) is "unknown".
OracleVerdict brute_force_oracle(const LinearSystem& system, long resolution,
                                 long combination_cap = 200000, long grid_cap = 2000000);

}  // namespace ivfalsify
