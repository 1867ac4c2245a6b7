#include "ivfalsify/typespace.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ivfalsify {

TypeSpace::TypeSpace(int n_treatments, int n_instruments, long cap)
    : L_(n_treatments), K_(n_instruments) {
  if (L_ < 1 || K_ < 1) throw std::invalid_argument("type space needs L >= 1 and K >= 1");
  long size = 1;
  for (int k = 0; k < K_; ++k) {
    size *= L_;
    if (size > cap) {
      throw std::invalid_argument("type space size " + std::to_string(L_) + "^" +
                                  std::to_string(K_) + " exceeds the cap of " +
                                  std::to_string(cap));
    }
  }
  size_ = size;
}

std::vector<int> TypeSpace::type(long index) const {
  if (index < 0 || index >= size_) throw std::invalid_argument("type index out of range");
  std::vector<int> response(K_);
  for (int k = K_ - 1; k >= 0; --k) {
    response[k] = static_cast<int>(index % L_);
    index /= L_;
  }
  return response;
}

long TypeSpace::index_of(const std::vector<int>& response) const {
  if (static_cast<int>(response.size()) != K_) {
    throw std::invalid_argument("response vector length does not match the instrument count");
  }
  long index = 0;
  for (int k = 0; k < K_; ++k) {
    if (response[k] < 0 || response[k] >= L_) {
      throw std::invalid_argument("response vector holds a treatment index out of range");
    }
    index = index * L_ + response[k];
  }
  return index;
}

std::string TypeSpace::describe(long index, const Support& support) const {
  auto response = type(index);
  std::string out = "(";
  for (int k = 0; k < K_; ++k) {
    if (k) out += ",";
    out += support.treatments.at(response[k]);
  }
  return out + ")";
}

const char* preset_name(Preset preset) {
  switch (preset) {
    case Preset::none: return "none";
    case Preset::no_defiers: return "no-defiers";
    case Preset::ordered_monotone: return "ordered-monotone";
    case Preset::unordered_monotone: return "unordered-monotone";
    case Preset::custom: return "custom";
  }
  return "?";
}

Preset preset_from_name(const std::string& name) {
  for (Preset p : {Preset::none, Preset::no_defiers, Preset::ordered_monotone,
                   Preset::unordered_monotone, Preset::custom}) {
    if (name == preset_name(p)) return p;
  }
  throw std::invalid_argument("unknown restriction preset: '" + name + "'");
}

RestrictionSpec make_restriction(Preset preset, const Support& support,
                                 std::vector<int> promoted,
                                 std::vector<std::vector<int>> custom_ruled_out,
                                 std::vector<ExtraRow> extra_rows) {
  const int L = support.n_treatments();
  const int K = support.n_instruments();

  RestrictionSpec spec;
  spec.preset = preset;
  spec.extra_rows = std::move(extra_rows);

  std::set<std::vector<int>> ruled;
  auto all_pairs = [&](auto&& keep) {
    // Binary-instrument presets: enumerate switches (a,b), a != b.
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b)
        if (a != b && !keep(a, b)) ruled.insert({a, b});
  };

  switch (preset) {
    case Preset::none:
      break;
    case Preset::no_defiers:
      if (L != 2 || K != 2) {
        throw std::invalid_argument("no-defiers needs binary treatment and binary instrument");
      }
      if (!support.treatments_ordered) {
        throw std::invalid_argument("no-defiers needs an ordered treatment support");
      }
      ruled.insert({1, 0});
      break;
    case Preset::ordered_monotone: {
      if (!support.treatments_ordered) {
        throw std::invalid_argument("ordered-monotone needs an ordered treatment support");
      }
      // Rule out every response vector with a strict decrease between any
      // two instrument positions; survivors are the weakly increasing ones.
      TypeSpace types(L, K);
      for (long t = 0; t < types.size(); ++t) {
        auto response = types.type(t);
        if (!std::is_sorted(response.begin(), response.end())) ruled.insert(response);
      }
      break;
    }
    case Preset::unordered_monotone: {
      if (K != 2) throw std::invalid_argument("unordered-monotone needs a binary instrument");
      if (promoted.empty()) {
        throw std::invalid_argument("unordered-monotone needs a nonempty promoted treatment set");
      }
      std::vector<bool> in_promoted(L, false);
      for (int x : promoted) {
        if (x < 0 || x >= L) throw std::invalid_argument("promoted treatment index out of range");
        in_promoted[x] = true;
      }
      // Only complement -> promoted switches stay allowed; staying put is
      // always allowed (a switch requires a != b).
      all_pairs([&](int a, int b) { return !in_promoted[a] && in_promoted[b]; });
      break;
    }
    case Preset::custom:
      break;
  }

  for (auto& response : custom_ruled_out) {
    if (static_cast<int>(response.size()) != K) {
      throw std::invalid_argument("ruled-out response vector length does not match K");
    }
    for (int x : response) {
      if (x < 0 || x >= L) {
        throw std::invalid_argument("ruled-out response vector holds an unknown treatment");
      }
    }
    ruled.insert(std::move(response));
  }

  spec.promoted = std::move(promoted);
  std::sort(spec.promoted.begin(), spec.promoted.end());
  spec.ruled_out.assign(ruled.begin(), ruled.end());
  return spec;
}

LinearSystem build_consistency_system(const ObservedDistribution& d, const TypeSpace& types) {
  const Support& s = d.support();
  if (types.n_treatments() != s.n_treatments() || types.n_instruments() != s.n_instruments()) {
    throw std::invalid_argument("type space does not match the observed support");
  }
  LinearSystem system;
  system.n_vars = static_cast<int>(types.size());

  for (int z = 0; z < s.n_instruments(); ++z) {
    for (int x = 0; x < s.n_treatments(); ++x) {
      Row row;
      row.coeffs.assign(types.size(), Rational(0));
      for (long t = 0; t < types.size(); ++t) {
        if (types.type(t)[z] == x) row.coeffs[t] = 1;
      }
      row.rhs = d.cond_treatment(z, x);
      row.sense = RowSense::eq;
      row.kind = RowKind::consistency;
      row.label = "consistency " + s.instruments[z] + ":" + s.treatments[x];
      system.append(std::move(row));
    }
  }

  Row total;
  total.coeffs.assign(types.size(), Rational(1));
  total.rhs = 1;
  total.sense = RowSense::eq;
  total.kind = RowKind::adding_up;
  total.label = "adding-up";
  system.append(std::move(total));
  return system;
}

std::vector<Row> build_restriction_rows(const TypeSpace& types, const Support& support,
                                        const RestrictionSpec& restriction) {
  std::vector<Row> rows;
  for (const auto& response : restriction.ruled_out) {
    const long t = types.index_of(response);
    const std::string name = types.describe(t, support);
    Row up;
    up.coeffs.assign(types.size(), Rational(0));
    up.coeffs[t] = 1;
    up.rhs = 0;
    up.sense = RowSense::le;
    up.kind = RowKind::restriction;
    up.label = "forbid " + name;
    Row down = up;
    down.coeffs[t] = -1;
    down.label = "forbid " + name + " (reverse)";
    rows.push_back(std::move(up));
    rows.push_back(std::move(down));
  }
  for (size_t i = 0; i < restriction.extra_rows.size(); ++i) {
    const ExtraRow& extra = restriction.extra_rows[i];
    Row row;
    row.coeffs.assign(types.size(), Rational(0));
    for (const auto& [response, coeff] : extra.terms) {
      row.coeffs[types.index_of(response)] += coeff;
    }
    row.rhs = extra.rhs;
    row.sense = RowSense::le;
    row.kind = RowKind::extra;
    row.label = extra.label.empty() ? "extra[" + std::to_string(i) + "]" : extra.label;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> build_always_taker_rows(const ObservedDistribution& d, const TypeSpace& types) {
  const Support& s = d.support();
  if (s.n_instruments() != 2 || types.n_instruments() != 2) {
    throw std::invalid_argument("always-taker ceilings need a binary instrument");
  }
  std::vector<Row> rows;
  for (int x = 0; x < s.n_treatments(); ++x) {
    Row row;
    row.coeffs.assign(types.size(), Rational(0));
    row.coeffs[types.index_of({x, x})] = 1;
    row.rhs = psi_mass(d, x, {0, 1});
    row.sense = RowSense::le;
    row.kind = RowKind::always_taker;
    row.label = "always-taker " + s.treatments[x];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> build_sufficient_taker_rows(const ObservedDistribution& d,
                                             const TypeSpace& types, const PsiTable& psi) {
  const Support& s = d.support();
  if (types.n_treatments() != s.n_treatments() || types.n_instruments() != s.n_instruments()) {
    throw std::invalid_argument("type space does not match the observed support");
  }
  std::vector<Row> rows;
  for (const auto& entry : psi.entries()) {
    Row row;
    row.coeffs.assign(types.size(), Rational(0));
    for (long t = 0; t < types.size(); ++t) {
      auto response = types.type(t);
      bool takes_everywhere = true;
      for (int z : entry.instruments) {
        if (response[z] != entry.treatment) { takes_everywhere = false; break; }
      }
      if (takes_everywhere) row.coeffs[t] = 1;
    }
    row.rhs = entry.total;
    row.sense = RowSense::le;
    row.kind = RowKind::sufficient_taker;
    std::string subset = "{";
    for (size_t i = 0; i < entry.instruments.size(); ++i) {
      if (i) subset += ",";
      subset += s.instruments[entry.instruments[i]];
    }
    subset += "}";
    row.label = "sufficient-taker " + s.treatments[entry.treatment] + " " + subset;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ivfalsify
