#include "ivfalsify/feasibility.hpp"

#include <algorithm>
#include <stdexcept>

namespace ivfalsify {

const char* row_kind_name(RowKind kind) {
  switch (kind) {
    case RowKind::consistency: return "consistency";
    case RowKind::adding_up: return "adding-up";
    case RowKind::restriction: return "restriction";
    case RowKind::always_taker: return "always-taker";
    case RowKind::sufficient_taker: return "sufficient-taker";
    case RowKind::extra: return "extra";
  }
  return "?";
}

void LinearSystem::append(Row row) {
  if (static_cast<int>(row.coeffs.size()) != n_vars) {
    throw std::invalid_argument("row '" + row.label + "' has " +
                                std::to_string(row.coeffs.size()) + " coefficients, expected " +
                                std::to_string(n_vars));
  }
  rows.push_back(std::move(row));
}

void LinearSystem::append(std::vector<Row> more) {
  for (auto& r : more) append(std::move(r));
}

bool LinearSystem::satisfied_by(const std::vector<Rational>& p) const {
  if (static_cast<int>(p.size()) != n_vars) return false;
  for (const auto& v : p) {
    if (v < 0) return false;
  }
  for (const auto& row : rows) {
    Rational lhs = 0;
    for (int j = 0; j < n_vars; ++j) lhs += row.coeffs[j] * p[j];
    if (row.sense == RowSense::eq ? lhs != row.rhs : lhs > row.rhs) return false;
  }
  return true;
}

namespace {

/// Phase-1 simplex tableau over exact rationals. Columns are the original
/// variables, one slack per <= row, then one artificial per row; Bland's
/// rule guarantees termination.
class PhaseOneTableau {
 public:
  explicit PhaseOneTableau(const LinearSystem& system) : m_(system.rows.size()) {
    const int n = system.n_vars;
    int n_slack = 0;
    for (const auto& r : system.rows) {
      if (r.sense == RowSense::le) ++n_slack;
    }
    slack_off_ = n;
    art_off_ = n + n_slack;
    cols_ = art_off_ + m_;

    tab_.assign(m_, std::vector<Rational>(cols_ + 1, Rational(0)));
    sigma_.assign(m_, 1);
    basis_.resize(m_);

    int slack = 0;
    for (int i = 0; i < m_; ++i) {
      const Row& r = system.rows[i];
      const int s = r.rhs < 0 ? -1 : 1;
      sigma_[i] = s;
      for (int j = 0; j < n; ++j) tab_[i][j] = s * r.coeffs[j];
      if (r.sense == RowSense::le) tab_[i][slack_off_ + slack++] = s;
      tab_[i][art_off_ + i] = 1;
      tab_[i][cols_] = s * r.rhs;
      basis_[i] = art_off_ + i;
    }

    // Reduced costs for minimizing the sum of artificials: the artificial
    // columns start at zero, everything else at minus its column sum.
    z_.assign(cols_ + 1, Rational(0));
    for (int j = 0; j < art_off_; ++j) {
      for (int i = 0; i < m_; ++i) z_[j] -= tab_[i][j];
    }
    for (int i = 0; i < m_; ++i) z_[cols_] -= tab_[i][cols_];
  }

  void run() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (z_[j] < 0) { enter = j; break; }  // Bland: lowest eligible index
      }
      if (enter < 0) return;

      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rational ratio = tab_[i][cols_] / tab_[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw std::logic_error("phase-1 objective cannot be unbounded");
      pivot(leave, enter);
    }
  }

  Rational objective() const {
    Rational v = 0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= art_off_) v += tab_[i][cols_];
    }
    return v;
  }

  std::vector<Rational> witness(int n) const {
    std::vector<Rational> x(n, Rational(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n) x[basis_[i]] = tab_[i][cols_];
    }
    return x;
  }

  /// Row weights proving emptiness, mapped back to the original row signs.
  std::vector<Rational> farkas_weights() const {
    std::vector<Rational> w(m_);
    for (int i = 0; i < m_; ++i) w[i] = sigma_[i] * (z_[art_off_ + i] - 1);
    return w;
  }

 private:
  void pivot(int r, int c) {
    const Rational inv = 1 / tab_[r][c];
    for (auto& v : tab_[r]) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || tab_[i][c] == 0) continue;
      const Rational f = tab_[i][c];
      for (int j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[r][j];
    }
    if (z_[c] != 0) {
      const Rational f = z_[c];
      for (int j = 0; j <= cols_; ++j) z_[j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  int m_;
  int slack_off_ = 0;
  int art_off_ = 0;
  int cols_ = 0;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> z_;
  std::vector<int> basis_;
  std::vector<int> sigma_;
};

}  // namespace

FeasibilityResult solve_feasibility(const LinearSystem& system) {
  if (system.n_vars <= 0) throw std::invalid_argument("system has no variables");
  for (const auto& r : system.rows) {
    if (static_cast<int>(r.coeffs.size()) != system.n_vars) {
      throw std::invalid_argument("row '" + r.label + "' width does not match the system");
    }
  }

  PhaseOneTableau tableau(system);
  tableau.run();

  FeasibilityResult result;
  if (tableau.objective() == 0) {
    result.feasible = true;
    result.witness = tableau.witness(system.n_vars);
    if (!system.satisfied_by(result.witness)) {
      throw std::logic_error("internal error: simplex witness fails the system it solved");
    }
    return result;
  }

  FarkasCertificate cert;
  cert.weights = tableau.farkas_weights();
  for (size_t i = 0; i < system.rows.size(); ++i) {
    if (cert.weights[i] != 0) cert.violated_labels.push_back(system.rows[i].label);
  }
  if (!verify_certificate(system, cert)) {
    throw std::logic_error("internal error: refutation certificate failed verification");
  }
  result.feasible = false;
  result.certificate = std::move(cert);
  return result;
}

bool verify_certificate(const LinearSystem& system, const FarkasCertificate& cert) {
  if (cert.weights.size() != system.rows.size()) return false;
  for (size_t i = 0; i < system.rows.size(); ++i) {
    if (system.rows[i].sense == RowSense::le && cert.weights[i] < 0) return false;
  }
  for (int j = 0; j < system.n_vars; ++j) {
    Rational combined = 0;
    for (size_t i = 0; i < system.rows.size(); ++i) {
      combined += cert.weights[i] * system.rows[i].coeffs[j];
    }
    if (combined < 0) return false;
  }
  Rational combined_rhs = 0;
  for (size_t i = 0; i < system.rows.size(); ++i) {
    combined_rhs += cert.weights[i] * system.rows[i].rhs;
  }
  return combined_rhs < 0;
}

const char* oracle_verdict_name(OracleVerdict verdict) {
  switch (verdict) {
    case OracleVerdict::feasible: return "feasible";
    case OracleVerdict::infeasible: return "infeasible";
    case OracleVerdict::unknown: return "unknown";
  }
  return "?";
}

namespace {

/// Binomial coefficient with saturation, for enumeration-size guards.
long choose_capped(long n, long k, long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long result = 1;
  for (long i = 1; i <= k; ++i) {
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return result;
}

enum class SolveStatus { unique, none, underdetermined };

/// Gaussian elimination over exact rationals for a square-rank probe:
/// solves rows * x = rhs where each row is (coeffs, rhs).
SolveStatus solve_exact(const std::vector<std::pair<std::vector<Rational>, Rational>>& rows,
                        int n, std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> a;
  a.reserve(rows.size());
  for (const auto& [coeffs, rhs] : rows) {
    auto row = coeffs;
    row.push_back(rhs);
    a.push_back(std::move(row));
  }
  const int m = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i) {
      if (a[i][c] != 0) { pr = i; break; }
    }
    if (pr < 0) continue;
    std::swap(a[r], a[pr]);
    const Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (int j = c; j <= n; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < m; ++i) {
    if (a[i][n] != 0) return SolveStatus::none;
  }
  if (r < n) return SolveStatus::underdetermined;
  x.assign(n, Rational(0));
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = a[i][n];
  return SolveStatus::unique;
}

int matrix_rank(const std::vector<std::vector<Rational>>& rows, int n) {
  auto a = rows;
  const int m = static_cast<int>(a.size());
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i) {
      if (a[i][c] != 0) { pr = i; break; }
    }
    if (pr < 0) continue;
    std::swap(a[r], a[pr]);
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

OracleVerdict brute_force_oracle(const LinearSystem& system, long resolution,
                                 long combination_cap, long grid_cap) {
  const int n = system.n_vars;
  if (n <= 0 || n > 12) {
    throw std::invalid_argument("brute-force oracle handles 1..12 variables only");
  }
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");

  // Phase A: exhaustive sweep of simplex grid points c / resolution.
  bool grid_complete = choose_capped(resolution + n - 1, n - 1, grid_cap) <= grid_cap;
  if (grid_complete) {
    std::vector<Rational> p(n, Rational(0));
    auto sweep = [&](auto&& self, int idx, long left) -> bool {
      if (idx == n - 1) {
        p[idx] = Rational(left, resolution);
        return system.satisfied_by(p);
      }
      for (long c = 0; c <= left; ++c) {
        p[idx] = Rational(c, resolution);
        if (self(self, idx + 1, left - c)) return true;
      }
      return false;
    };
    if (sweep(sweep, 0, resolution)) return OracleVerdict::feasible;
  }

  // Phase B: complete basic-solution enumeration. Activate all equality
  // rows plus every (n - rank) subset of {<= rows, x_j >= 0}; a nonempty
  // region over p >= 0 is pointed, so it is nonempty iff some such active
  // set yields a point satisfying everything.
  std::vector<std::vector<Rational>> eq_coeffs;
  std::vector<std::pair<std::vector<Rational>, Rational>> eq_rows;
  std::vector<std::pair<std::vector<Rational>, Rational>> pool;
  for (const auto& r : system.rows) {
    if (r.sense == RowSense::eq) {
      eq_coeffs.push_back(r.coeffs);
      eq_rows.emplace_back(r.coeffs, r.rhs);
    } else {
      pool.emplace_back(r.coeffs, r.rhs);
    }
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> unit(n, Rational(0));
    unit[j] = 1;
    pool.emplace_back(std::move(unit), Rational(0));
  }

  const int k = std::max(0, n - matrix_rank(eq_coeffs, n));
  const long pool_size = static_cast<long>(pool.size());
  if (choose_capped(pool_size, k, combination_cap) > combination_cap) {
    return OracleVerdict::unknown;
  }

  bool candidate_satisfies = false;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  auto advance = [&]() {
    int i = k - 1;
    while (i >= 0 && pick[i] == pool_size - k + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    return true;
  };
  if (k <= pool_size) {
    do {
      auto active = eq_rows;
      for (int i : pick) active.push_back(pool[i]);
      std::vector<Rational> x;
      if (solve_exact(active, n, x) != SolveStatus::unique) continue;
      if (system.satisfied_by(x)) {
        candidate_satisfies = true;
        break;
      }
    } while (advance());
  }

  return candidate_satisfies ? OracleVerdict::unknown : OracleVerdict::infeasible;
}

}  // namespace ivfalsify
