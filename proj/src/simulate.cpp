#include "ivfalsify/simulate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ivfalsify/rng.hpp"

namespace ivfalsify {

namespace {

void check_table(const std::vector<DGPType>& table, const Support& support) {
  if (table.empty()) throw std::invalid_argument("type table must not be empty");
  const int L = support.n_treatments();
  const int K = support.n_instruments();
  Rational total(0);
  for (const DGPType& type : table) {
    if (static_cast<int>(type.response.size()) != K) {
      throw std::invalid_argument("response vector length must match the instrument count");
    }
    for (int x : type.response) {
      if (x < 0 || x >= L) throw std::invalid_argument("response treatment outside the support");
    }
    if (static_cast<int>(type.outcome_bins.size()) != L) {
      throw std::invalid_argument("one potential-outcome bin per treatment is required");
    }
    for (int b : type.outcome_bins) {
      if (b < 0 || b >= support.n_bins()) {
        throw std::invalid_argument("potential-outcome bin outside the support");
      }
    }
    if (type.weight < 0) throw std::invalid_argument("stratum weights must be nonnegative");
    total += type.weight;
  }
  if (total != 1) throw std::invalid_argument("stratum weights must sum to one");
}

}  // namespace

void DGPSpec::validate() const {
  support.validate();
  const int L = support.n_treatments();
  const int K = support.n_instruments();
  if (per_instrument_tables.empty()) {
    check_table(type_table, support);
  } else {
    if (static_cast<int>(per_instrument_tables.size()) != K) {
      throw std::invalid_argument("per-instrument tables must cover every instrument value");
    }
    for (const auto& table : per_instrument_tables) check_table(table, support);
  }
  if (static_cast<int>(instrument_law.size()) != K) {
    throw std::invalid_argument("instrument law must weight every instrument value");
  }
  Rational z_total(0);
  for (const Rational& w : instrument_law) {
    if (w < 0) throw std::invalid_argument("instrument weights must be nonnegative");
    z_total += w;
  }
  if (z_total != 1) throw std::invalid_argument("instrument weights must sum to one");
  for (const auto& [key, bin] : exclusion_break) {
    const auto& [x, z] = key;
    if (x < 0 || x >= L || z < 0 || z >= K) {
      throw std::invalid_argument("exclusion break keyed outside the support");
    }
    if (bin < 0 || bin >= support.n_bins()) {
      throw std::invalid_argument("exclusion break bin outside the support");
    }
  }
}

ObservedDistribution generate_observed(const DGPSpec& dgp) {
  dgp.validate();
  const int K = dgp.support.n_instruments();
  std::vector<Cell> cells;
  for (int z = 0; z < K; ++z) {
    const std::vector<DGPType>& table =
        dgp.per_instrument_tables.empty() ? dgp.type_table : dgp.per_instrument_tables[z];
    for (const DGPType& type : table) {
      if (type.weight == 0) continue;
      const int x = type.response[z];
      int bin = type.outcome_bins[x];
      if (const auto it = dgp.exclusion_break.find({x, z}); it != dgp.exclusion_break.end()) {
        bin = it->second;
      }
      cells.push_back({z, x, bin, type.weight});
    }
  }
  return ObservedDistribution::from_cells(dgp.support, cells);
}

DGPSpec worked_example_dgp() {
  DGPSpec dgp;
  dgp.support = Support{
      {{"y0", {}, {}}, {"y1", {}, {}}},
      {"x0", "x1", "x2"},
      {"z0", "z1"},
      true,
  };
  dgp.type_table = {
      {{0, 1}, {0, 1, 1}, parse_rational("1/2")},
      {{1, 2}, {0, 1, 1}, parse_rational("1/4")},
      {{2, 2}, {0, 1, 1}, parse_rational("1/4")},
  };
  dgp.instrument_law = {parse_rational("1/2"), parse_rational("1/2")};
  return dgp;
}

DGPSpec random_valid_dgp(std::uint64_t seed, int n_treatments, int n_instruments, int n_bins,
                         const RestrictionSpec& restriction) {
  if (n_treatments < 1 || n_instruments < 2 || n_bins < 1) {
    throw std::invalid_argument("need at least one treatment, two instruments, and one bin");
  }
  if (!restriction.extra_rows.empty()) {
    throw std::invalid_argument("the generator does not honor extra inequality rows");
  }

  DGPSpec dgp;
  for (int b = 0; b < n_bins; ++b) {
    dgp.support.outcome_bins.push_back({"y" + std::to_string(b), {}, {}});
  }
  for (int x = 0; x < n_treatments; ++x) dgp.support.treatments.push_back("x" + std::to_string(x));
  for (int z = 0; z < n_instruments; ++z) {
    dgp.support.instruments.push_back("z" + std::to_string(z));
  }
  dgp.support.treatments_ordered = true;

  const RestrictionSpec expanded = make_restriction(
      restriction.preset, dgp.support, restriction.promoted, restriction.ruled_out, {});
  const TypeSpace types(n_treatments, n_instruments);

  SplitMix64 rng(seed);
  std::vector<DGPType> strata;
  Rational total(0);
  for (long t = 0; t < types.size(); ++t) {
    const std::vector<int> response = types.type(t);
    if (std::binary_search(expanded.ruled_out.begin(), expanded.ruled_out.end(), response)) {
      continue;
    }
    DGPType stratum;
    stratum.response = response;
    for (int x = 0; x < n_treatments; ++x) {
      stratum.outcome_bins.push_back(static_cast<int>(rng.below(n_bins)));
    }
    stratum.weight = Rational(static_cast<long>(rng.below(5)));
    total += stratum.weight;
    strata.push_back(std::move(stratum));
  }
  if (strata.empty()) throw std::invalid_argument("restriction rules out every response type");
  if (total == 0) {
    strata.front().weight = 1;
    total = 1;
  }
  for (DGPType& stratum : strata) stratum.weight /= total;
  dgp.type_table = std::move(strata);

  Rational z_total(0);
  for (int z = 0; z < n_instruments; ++z) {
    dgp.instrument_law.push_back(Rational(static_cast<long>(1 + rng.below(4))));
    z_total += dgp.instrument_law.back();
  }
  for (Rational& w : dgp.instrument_law) w /= z_total;

  dgp.validate();
  return dgp;
}

std::vector<Record> records_realizing(const ObservedDistribution& d,
                                      const std::vector<Rational>& instrument_law,
                                      long max_records) {
  const Support& support = d.support();
  const int K = support.n_instruments();
  if (static_cast<int>(instrument_law.size()) != K) {
    throw std::invalid_argument("instrument law must weight every instrument value");
  }
  for (const Rational& w : instrument_law) {
    if (w <= 0) throw std::invalid_argument("record realization needs positive instrument weights");
  }

  using Integer = boost::multiprecision::mpz_int;
  std::vector<Cell> cells = d.to_cells();
  Integer common(1);
  for (const Cell& cell : cells) {
    const Rational joint = instrument_law[cell.instrument] * cell.mass;
    common = boost::multiprecision::lcm(common, Integer(denominator(joint)));
  }
  if (common > max_records) {
    throw std::invalid_argument("record realization needs more than " +
                                std::to_string(max_records) + " rows");
  }

  std::vector<Record> records;
  for (const Cell& cell : cells) {
    const Rational joint = instrument_law[cell.instrument] * cell.mass;
    const Integer count = Integer(numerator(joint)) * (common / Integer(denominator(joint)));
    const OutcomeBin& bin = support.outcome_bins[cell.bin];
    const std::string y = support.numeric_bins() ? format_rational(*bin.lo) : bin.label;
    const Record record{y, support.treatments[cell.treatment], support.instruments[cell.instrument]};
    for (Integer i = 0; i < count; ++i) records.push_back(record);
  }
  return records;
}

}  // namespace ivfalsify
