#include "ivfalsify/observed.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ivfalsify {

namespace {

int find_label(const std::vector<std::string>& labels, std::string_view label,
               const char* what) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw std::invalid_argument(std::string("unknown ") + what + " label: '" +
                              std::string(label) + "'");
}

void check_unique(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw std::invalid_argument(std::string("empty ") + what + " label");
    if (!seen.insert(l).second) {
      throw std::invalid_argument(std::string("duplicate ") + what + " label: '" + l + "'");
    }
  }
}

}  // namespace

bool Support::numeric_bins() const {
  return !outcome_bins.empty() && outcome_bins.front().lo.has_value();
}

int Support::bin_index(std::string_view label) const {
  for (size_t i = 0; i < outcome_bins.size(); ++i) {
    if (outcome_bins[i].label == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown outcome bin label: '" + std::string(label) + "'");
}

int Support::treatment_index(std::string_view label) const {
  return find_label(treatments, label, "treatment");
}

int Support::instrument_index(std::string_view label) const {
  return find_label(instruments, label, "instrument");
}

int Support::bin_for_value(const Rational& y) const {
  if (!numeric_bins()) {
    throw std::invalid_argument("outcome bins carry no numeric bounds; match labels instead");
  }
  const int last = n_bins() - 1;
  for (int i = 0; i <= last; ++i) {
    const auto& bin = outcome_bins[i];
    if (y >= *bin.lo && (y < *bin.hi || (i == last && y == *bin.hi))) return i;
  }
  throw std::invalid_argument("outcome value outside every declared bin");
}

void Support::validate() const {
  if (outcome_bins.empty()) throw std::invalid_argument("support needs at least one outcome bin");
  if (treatments.empty()) throw std::invalid_argument("support needs at least one treatment value");
  if (instruments.size() < 2) throw std::invalid_argument("support needs at least two instrument values");

  std::vector<std::string> bin_labels;
  bin_labels.reserve(outcome_bins.size());
  for (const auto& b : outcome_bins) bin_labels.push_back(b.label);
  check_unique(bin_labels, "outcome bin");
  check_unique(treatments, "treatment");
  check_unique(instruments, "instrument");

  const bool bounded = outcome_bins.front().lo.has_value();
  for (const auto& b : outcome_bins) {
    if (b.lo.has_value() != bounded || b.hi.has_value() != bounded) {
      throw std::invalid_argument("outcome bins must be all bounded or all unbounded");
    }
  }
  if (bounded) {
    for (size_t i = 0; i < outcome_bins.size(); ++i) {
      const auto& b = outcome_bins[i];
      if (!(*b.lo < *b.hi)) {
        throw std::invalid_argument("outcome bin '" + b.label + "' has an empty range");
      }
      if (i > 0 && !(*outcome_bins[i - 1].hi <= *b.lo)) {
        throw std::invalid_argument("outcome bins overlap or are out of order at '" + b.label + "'");
      }
    }
  }
}

ObservedDistribution::ObservedDistribution(
    Support support, std::vector<std::vector<std::vector<Rational>>> table)
    : support_(std::move(support)), phi_(std::move(table)) {}

ObservedDistribution ObservedDistribution::from_cells(Support support,
                                                      const std::vector<Cell>& cells) {
  support.validate();
  const int K = support.n_instruments();
  const int L = support.n_treatments();
  const int B = support.n_bins();
  std::vector table(K, std::vector(L, std::vector<Rational>(B, Rational(0))));
  for (const auto& c : cells) {
    if (c.instrument < 0 || c.instrument >= K || c.treatment < 0 || c.treatment >= L ||
        c.bin < 0 || c.bin >= B) {
      throw std::invalid_argument("cell index outside the declared support");
    }
    if (c.mass < 0) throw std::invalid_argument("negative cell mass");
    table[c.instrument][c.treatment][c.bin] += c.mass;
  }
  for (int z = 0; z < K; ++z) {
    Rational total = 0;
    for (int x = 0; x < L; ++x)
      for (int b = 0; b < B; ++b) total += table[z][x][b];
    if (total != 1) {
      throw std::invalid_argument("cells for instrument '" + support.instruments[z] +
                                  "' sum to " + format_rational(total) + ", expected 1/1");
    }
  }
  return ObservedDistribution(std::move(support), std::move(table));
}

ObservedDistribution ObservedDistribution::from_records(Support support,
                                                        const std::vector<Record>& records) {
  support.validate();
  const int K = support.n_instruments();
  const int L = support.n_treatments();
  const int B = support.n_bins();
  std::vector counts(K, std::vector(L, std::vector<long>(B, 0)));
  std::vector<long> per_instrument(K, 0);
  for (const auto& r : records) {
    const int z = support.instrument_index(r.z);
    const int x = support.treatment_index(r.x);
    const int b = support.numeric_bins() ? support.bin_for_value(parse_rational(r.y))
                                         : support.bin_index(r.y);
    ++counts[z][x][b];
    ++per_instrument[z];
  }
  std::vector table(K, std::vector(L, std::vector<Rational>(B, Rational(0))));
  for (int z = 0; z < K; ++z) {
    if (per_instrument[z] == 0) {
      throw std::invalid_argument("no records observed for instrument '" +
                                  support.instruments[z] + "'");
    }
    for (int x = 0; x < L; ++x)
      for (int b = 0; b < B; ++b)
        table[z][x][b] = Rational(counts[z][x][b], per_instrument[z]);
  }
  return ObservedDistribution(std::move(support), std::move(table));
}

ObservedDistribution ObservedDistribution::from_csv(Support support, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty record text");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  auto split = [delim](const std::string& row) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream fs(row);
    while (std::getline(fs, field, delim)) out.push_back(field);
    if (!row.empty() && row.back() == delim) out.emplace_back();
    return out;
  };

  auto header = split(line);
  int col_y = -1, col_x = -1, col_z = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    std::string name = header[i];
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (name == "y") col_y = static_cast<int>(i);
    else if (name == "x") col_x = static_cast<int>(i);
    else if (name == "z") col_z = static_cast<int>(i);
  }
  if (col_y < 0 || col_x < 0 || col_z < 0) {
    throw std::invalid_argument("record header must name columns y, x, z");
  }

  std::vector<Record> records;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    const size_t needed = static_cast<size_t>(std::max({col_y, col_x, col_z})) + 1;
    if (fields.size() < needed) {
      throw std::invalid_argument("record line " + std::to_string(line_no) +
                                  " has too few fields");
    }
    records.push_back({fields[col_y], fields[col_x], fields[col_z]});
  }
  return from_records(std::move(support), records);
}

const Rational& ObservedDistribution::mass(int z, int x, int b) const {
  return phi_.at(z).at(x).at(b);
}

Rational ObservedDistribution::cond_treatment(int z, int x) const {
  Rational total = 0;
  for (const auto& m : phi_.at(z).at(x)) total += m;
  return total;
}

ObservedDistribution ObservedDistribution::binarize(int cut_treatment) const {
  if (!support_.treatments_ordered) {
    throw std::invalid_argument("binarize requires an ordered treatment support");
  }
  const int L = support_.n_treatments();
  if (cut_treatment <= 0 || cut_treatment >= L) {
    throw std::invalid_argument("binarize cut must split the treatment support in two");
  }
  Support merged = support_;
  const std::string& cut_label = support_.treatments[cut_treatment];
  merged.treatments = {"<" + cut_label, ">=" + cut_label};
  merged.treatments_ordered = true;

  const int K = support_.n_instruments();
  const int B = support_.n_bins();
  std::vector table(K, std::vector(2, std::vector<Rational>(B, Rational(0))));
  for (int z = 0; z < K; ++z)
    for (int x = 0; x < L; ++x)
      for (int b = 0; b < B; ++b) table[z][x < cut_treatment ? 0 : 1][b] += phi_[z][x][b];
  return ObservedDistribution(std::move(merged), std::move(table));
}

std::vector<Cell> ObservedDistribution::to_cells() const {
  std::vector<Cell> cells;
  for (int z = 0; z < support_.n_instruments(); ++z)
    for (int x = 0; x < support_.n_treatments(); ++x)
      for (int b = 0; b < support_.n_bins(); ++b)
        if (phi_[z][x][b] != 0) cells.push_back({z, x, b, phi_[z][x][b]});
  return cells;
}

}  // namespace ivfalsify
