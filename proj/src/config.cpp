#include "ivfalsify/config.hpp"

#include <json.hpp>
#include <stdexcept>
#include <utility>

namespace ivfalsify {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw std::invalid_argument("config: not a valid JSON document");
  return doc;
}

Rational rational_field(const json& value, const std::string& where) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_number()) {
    fail(where, "fractional number literals lose exactness; write the value as a string");
  }
  fail(where, "expected a fraction string or an integer");
}

std::string string_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) fail(where, "missing string field '" + key + "'");
  return obj[key].get<std::string>();
}

std::vector<std::string> label_list(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of labels");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) fail(where, "labels must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Support parse_support(const json& doc) {
  if (!doc.contains("support") || !doc["support"].is_object()) {
    fail("support", "missing object");
  }
  const json& s = doc["support"];
  Support support;
  if (!s.contains("outcome_bins") || !s["outcome_bins"].is_array()) {
    fail("support.outcome_bins", "expected an array");
  }
  for (const auto& bin : s["outcome_bins"]) {
    if (bin.is_string()) {
      support.outcome_bins.push_back({bin.get<std::string>(), {}, {}});
    } else if (bin.is_object()) {
      OutcomeBin b;
      b.label = string_field(bin, "label", "support.outcome_bins");
      if (bin.contains("lo")) b.lo = rational_field(bin["lo"], "support.outcome_bins.lo");
      if (bin.contains("hi")) b.hi = rational_field(bin["hi"], "support.outcome_bins.hi");
      support.outcome_bins.push_back(std::move(b));
    } else {
      fail("support.outcome_bins", "each bin is a label or {label, lo, hi}");
    }
  }
  support.treatments = label_list(s.value("treatments", json::array()), "support.treatments");
  support.instruments = label_list(s.value("instruments", json::array()), "support.instruments");
  if (s.contains("treatments_ordered")) {
    if (!s["treatments_ordered"].is_boolean()) fail("support.treatments_ordered", "expected a bool");
    support.treatments_ordered = s["treatments_ordered"].get<bool>();
  }
  support.validate();
  return support;
}

std::vector<int> treatment_vector(const json& value, const Support& support,
                                  const std::string& where) {
  std::vector<int> out;
  for (const std::string& label : label_list(value, where)) {
    out.push_back(support.treatment_index(label));
  }
  return out;
}

RestrictionSpec parse_restriction(const json& doc, const Support& support) {
  RestrictionSpec raw;
  if (!doc.contains("restriction")) {
    return make_restriction(Preset::none, support);
  }
  const json& r = doc["restriction"];
  if (!r.is_object()) fail("restriction", "expected an object");
  raw.preset = preset_from_name(r.value("preset", "none"));
  if (r.contains("promoted")) {
    raw.promoted = treatment_vector(r["promoted"], support, "restriction.promoted");
  }
  if (r.contains("ruled_out")) {
    if (!r["ruled_out"].is_array()) fail("restriction.ruled_out", "expected an array");
    for (const auto& vec : r["ruled_out"]) {
      raw.ruled_out.push_back(treatment_vector(vec, support, "restriction.ruled_out"));
    }
  }
  if (r.contains("rows")) {
    if (!r["rows"].is_array()) fail("restriction.rows", "expected an array");
    for (const auto& row : r["rows"]) {
      if (!row.is_object() || !row.contains("terms") || !row["terms"].is_array()) {
        fail("restriction.rows", "each row is {terms, rhs, label?}");
      }
      ExtraRow extra;
      for (const auto& term : row["terms"]) {
        if (!term.is_object() || !term.contains("type") || !term.contains("coeff")) {
          fail("restriction.rows.terms", "each term is {type, coeff}");
        }
        extra.terms.emplace_back(treatment_vector(term["type"], support, "restriction.rows.terms"),
                                 rational_field(term["coeff"], "restriction.rows.terms.coeff"));
      }
      if (!row.contains("rhs")) fail("restriction.rows", "missing rhs");
      extra.rhs = rational_field(row["rhs"], "restriction.rows.rhs");
      extra.label = row.value("label", "");
      raw.extra_rows.push_back(std::move(extra));
    }
  }
  return effective_restriction(raw, support);
}

}  // namespace

RestrictionSpec effective_restriction(const RestrictionSpec& restriction, const Support& support) {
  Preset preset = restriction.preset;
  if (preset == Preset::none && !restriction.ruled_out.empty()) preset = Preset::custom;
  return make_restriction(preset, support, restriction.promoted, restriction.ruled_out,
                          restriction.extra_rows);
}

RunConfig parse_run_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

  RunConfig config;
  config.support = parse_support(doc);

  const bool has_table = doc.contains("table");
  const bool has_records = doc.contains("records_text");
  if (has_table == has_records) {
    fail("input", "provide exactly one of 'table' or 'records_text'");
  }
  if (has_table) {
    if (!doc["table"].is_array()) fail("table", "expected an array of cells");
    for (const auto& cell : doc["table"]) {
      if (!cell.is_object()) fail("table", "each cell is {z, x, y, mass}");
      Cell c;
      c.instrument = config.support.instrument_index(string_field(cell, "z", "table"));
      c.treatment = config.support.treatment_index(string_field(cell, "x", "table"));
      c.bin = config.support.bin_index(string_field(cell, "y", "table"));
      c.mass = rational_field(cell.contains("mass") ? cell["mass"] : json(), "table.mass");
      config.table.push_back(std::move(c));
    }
  } else {
    if (!doc["records_text"].is_string()) fail("records_text", "expected a string");
    config.records_text = doc["records_text"].get<std::string>();
  }

  if (doc.contains("binarize_at")) {
    if (!doc["binarize_at"].is_string()) fail("binarize_at", "expected a treatment label");
    const std::string cut = doc["binarize_at"].get<std::string>();
    config.support.treatment_index(cut);  // must exist
    if (!config.support.treatments_ordered) {
      fail("binarize_at", "binarization needs an ordered treatment support");
    }
    config.binarize_at = cut;
  }

  // The restriction references the post-binarization support.
  Support effective = config.support;
  if (config.binarize_at) {
    const int cut = config.support.treatment_index(*config.binarize_at);
    if (cut <= 0 || cut >= config.support.n_treatments()) {
      fail("binarize_at", "cut must leave treatments on both sides");
    }
    effective.treatments = {"<" + *config.binarize_at, ">=" + *config.binarize_at};
  }
  config.restriction = parse_restriction(doc, effective);

  if (doc.contains("checks")) {
    const json& c = doc["checks"];
    if (!c.is_object()) fail("checks", "expected an object");
    const auto flag = [&](const char* key, bool fallback) {
      if (!c.contains(key)) return fallback;
      if (!c[key].is_boolean()) fail(std::string("checks.") + key, "expected a bool");
      return c[key].get<bool>();
    };
    config.checks.feasibility = flag("feasibility", true);
    config.checks.flow = flag("flow", false);
    config.checks.fosd = flag("fosd", false);
    config.checks.ordered_bounds = flag("ordered_bounds", false);
    config.checks.sufficient_takers = flag("sufficient_takers", false);
    config.checks.submono_harness = flag("submono_harness", false);
    for (const auto& [key, value] : c.items()) {
      if (key != "feasibility" && key != "flow" && key != "fosd" && key != "ordered_bounds" &&
          key != "sufficient_takers" && key != "submono_harness") {
        fail("checks", "unknown check '" + key + "'");
      }
    }
  }

  if (doc.contains("caps")) {
    const json& c = doc["caps"];
    if (!c.is_object()) fail("caps", "expected an object");
    const auto cap = [&](const char* key, long fallback) {
      if (!c.contains(key)) return fallback;
      if (!c[key].is_number_integer()) fail(std::string("caps.") + key, "expected an integer");
      const long value = c[key].get<long>();
      if (value < 1) fail(std::string("caps.") + key, "must be positive");
      return value;
    };
    config.caps.types = cap("types", config.caps.types);
    config.caps.subsets = cap("subsets", config.caps.subsets);
    config.caps.part1 = static_cast<int>(cap("part1", config.caps.part1));
    config.caps.part2 = static_cast<int>(cap("part2", config.caps.part2));
    config.caps.submono = static_cast<int>(cap("submono", config.caps.submono));
  }

  const int K = config.support.n_instruments();
  const bool binary = config.binarize_at.has_value() || K == 2;
  if ((config.checks.flow || config.checks.fosd || config.checks.submono_harness) && !binary) {
    fail("checks", "flow, fosd, and submono_harness need a binary instrument");
  }
  if (config.checks.ordered_bounds) {
    if (!binary) fail("checks", "ordered_bounds needs a binary instrument");
    if (!config.support.treatments_ordered) {
      fail("checks", "ordered_bounds needs an ordered treatment support");
    }
  }
  return config;
}

DGPSpec parse_dgp_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

  DGPSpec dgp;
  dgp.support = parse_support(doc);

  const auto parse_types = [&](const json& list, const std::string& where) {
    if (!list.is_array() || list.empty()) fail(where, "expected a nonempty array of strata");
    std::vector<DGPType> table;
    for (const auto& entry : list) {
      if (!entry.is_object()) fail(where, "each stratum is {response, outcomes, weight}");
      DGPType type;
      if (!entry.contains("response")) fail(where, "missing response");
      type.response = treatment_vector(entry["response"], dgp.support, where + ".response");
      if (!entry.contains("outcomes")) fail(where, "missing outcomes");
      for (const std::string& label : label_list(entry["outcomes"], where + ".outcomes")) {
        type.outcome_bins.push_back(dgp.support.bin_index(label));
      }
      if (!entry.contains("weight")) fail(where, "missing weight");
      type.weight = rational_field(entry["weight"], where + ".weight");
      table.push_back(std::move(type));
    }
    return table;
  };

  if (doc.contains("per_instrument_types")) {
    if (!doc["per_instrument_types"].is_array()) {
      fail("per_instrument_types", "expected one stratum list per instrument value");
    }
    for (const auto& list : doc["per_instrument_types"]) {
      dgp.per_instrument_tables.push_back(parse_types(list, "per_instrument_types"));
    }
  }
  if (doc.contains("types")) {
    dgp.type_table = parse_types(doc["types"], "types");
  } else if (dgp.per_instrument_tables.empty()) {
    fail("types", "missing stratum list");
  }

  if (!doc.contains("instrument_law") || !doc["instrument_law"].is_array()) {
    fail("instrument_law", "expected an array of weights");
  }
  for (const auto& w : doc["instrument_law"]) {
    dgp.instrument_law.push_back(rational_field(w, "instrument_law"));
  }

  if (doc.contains("exclusion_break")) {
    if (!doc["exclusion_break"].is_array()) {
      fail("exclusion_break", "expected an array of {treatment, instrument, bin}");
    }
    for (const auto& entry : doc["exclusion_break"]) {
      if (!entry.is_object()) fail("exclusion_break", "each entry is {treatment, instrument, bin}");
      const int x =
          dgp.support.treatment_index(string_field(entry, "treatment", "exclusion_break"));
      const int z =
          dgp.support.instrument_index(string_field(entry, "instrument", "exclusion_break"));
      const int b = dgp.support.bin_index(string_field(entry, "bin", "exclusion_break"));
      dgp.exclusion_break[{x, z}] = b;
    }
  }

  dgp.validate();
  return dgp;
}

namespace {

ordered_json support_json(const Support& support) {
  ordered_json out;
  ordered_json bins = ordered_json::array();
  for (const OutcomeBin& bin : support.outcome_bins) {
    if (bin.lo || bin.hi) {
      ordered_json b;
      b["label"] = bin.label;
      if (bin.lo) b["lo"] = format_rational(*bin.lo);
      if (bin.hi) b["hi"] = format_rational(*bin.hi);
      bins.push_back(std::move(b));
    } else {
      bins.push_back(bin.label);
    }
  }
  out["outcome_bins"] = std::move(bins);
  out["treatments"] = support.treatments;
  out["instruments"] = support.instruments;
  out["treatments_ordered"] = support.treatments_ordered;
  return out;
}

}  // namespace

std::string dgp_config_json(const DGPSpec& dgp) {
  ordered_json doc;
  doc["support"] = support_json(dgp.support);

  const auto emit_types = [&](const std::vector<DGPType>& table) {
    ordered_json list = ordered_json::array();
    for (const DGPType& type : table) {
      ordered_json entry;
      ordered_json response = ordered_json::array();
      for (int x : type.response) response.push_back(dgp.support.treatments[x]);
      entry["response"] = std::move(response);
      ordered_json outcomes = ordered_json::array();
      for (int b : type.outcome_bins) outcomes.push_back(dgp.support.outcome_bins[b].label);
      entry["outcomes"] = std::move(outcomes);
      entry["weight"] = format_rational(type.weight);
      list.push_back(std::move(entry));
    }
    return list;
  };

  if (!dgp.type_table.empty()) doc["types"] = emit_types(dgp.type_table);
  if (!dgp.per_instrument_tables.empty()) {
    ordered_json lists = ordered_json::array();
    for (const auto& table : dgp.per_instrument_tables) lists.push_back(emit_types(table));
    doc["per_instrument_types"] = std::move(lists);
  }

  ordered_json law = ordered_json::array();
  for (const Rational& w : dgp.instrument_law) law.push_back(format_rational(w));
  doc["instrument_law"] = std::move(law);

  if (!dgp.exclusion_break.empty()) {
    ordered_json breaks = ordered_json::array();
    for (const auto& [key, bin] : dgp.exclusion_break) {
      ordered_json entry;
      entry["treatment"] = dgp.support.treatments[key.first];
      entry["instrument"] = dgp.support.instruments[key.second];
      entry["bin"] = dgp.support.outcome_bins[bin].label;
      breaks.push_back(std::move(entry));
    }
    doc["exclusion_break"] = std::move(breaks);
  }
  return doc.dump(2) + "\n";
}

std::string run_config_json(const RunConfig& config) {
  ordered_json doc;
  doc["support"] = support_json(config.support);

  if (!config.records_text.empty()) {
    doc["records_text"] = config.records_text;
  } else {
    ordered_json table = ordered_json::array();
    for (const Cell& cell : config.table) {
      ordered_json c;
      c["z"] = config.support.instruments[cell.instrument];
      c["x"] = config.support.treatments[cell.treatment];
      c["y"] = config.support.outcome_bins[cell.bin].label;
      c["mass"] = format_rational(cell.mass);
      table.push_back(std::move(c));
    }
    doc["table"] = std::move(table);
  }

  if (config.binarize_at) doc["binarize_at"] = *config.binarize_at;

  // The restriction references the post-binarization support.
  Support effective = config.support;
  if (config.binarize_at) {
    effective.treatments = {"<" + *config.binarize_at, ">=" + *config.binarize_at};
  }
  const auto type_labels = [&](const std::vector<int>& vec) {
    ordered_json labels = ordered_json::array();
    for (int x : vec) labels.push_back(effective.treatments[x]);
    return labels;
  };
  const RestrictionSpec& r = config.restriction;
  if (r.preset != Preset::none || !r.ruled_out.empty() || !r.extra_rows.empty()) {
    ordered_json restriction;
    restriction["preset"] = preset_name(r.preset);
    if (!r.promoted.empty()) restriction["promoted"] = type_labels(r.promoted);
    if (!r.ruled_out.empty()) {
      ordered_json ruled = ordered_json::array();
      for (const auto& vec : r.ruled_out) ruled.push_back(type_labels(vec));
      restriction["ruled_out"] = std::move(ruled);
    }
    if (!r.extra_rows.empty()) {
      ordered_json rows = ordered_json::array();
      for (const ExtraRow& row : r.extra_rows) {
        ordered_json out_row;
        ordered_json terms = ordered_json::array();
        for (const auto& [type, coeff] : row.terms) {
          ordered_json term;
          term["type"] = type_labels(type);
          term["coeff"] = format_rational(coeff);
          terms.push_back(std::move(term));
        }
        out_row["terms"] = std::move(terms);
        out_row["rhs"] = format_rational(row.rhs);
        if (!row.label.empty()) out_row["label"] = row.label;
        rows.push_back(std::move(out_row));
      }
      restriction["rows"] = std::move(rows);
    }
    doc["restriction"] = std::move(restriction);
  }

  ordered_json checks;
  checks["feasibility"] = config.checks.feasibility;
  checks["flow"] = config.checks.flow;
  checks["fosd"] = config.checks.fosd;
  checks["ordered_bounds"] = config.checks.ordered_bounds;
  checks["sufficient_takers"] = config.checks.sufficient_takers;
  checks["submono_harness"] = config.checks.submono_harness;
  doc["checks"] = std::move(checks);

  const RunCaps defaults;
  ordered_json caps = ordered_json::object();
  if (config.caps.types != defaults.types) caps["types"] = config.caps.types;
  if (config.caps.subsets != defaults.subsets) caps["subsets"] = config.caps.subsets;
  if (config.caps.part1 != defaults.part1) caps["part1"] = config.caps.part1;
  if (config.caps.part2 != defaults.part2) caps["part2"] = config.caps.part2;
  if (config.caps.submono != defaults.submono) caps["submono"] = config.caps.submono;
  if (!caps.empty()) doc["caps"] = std::move(caps);

  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> restriction_preset_catalog() {
  return {
      {"none", "nothing ruled out; consistency and overlap ceilings still apply"},
      {"no-defiers",
       "binary ordered treatment, binary instrument: rules out the response that is treated when "
       "the instrument is off and untreated when it is on"},
      {"ordered-monotone",
       "ordered treatments, any instrument count: rules out every response vector that is not "
       "weakly increasing along the declared order"},
      {"unordered-monotone",
       "binary instrument: given a promoted treatment set, rules out every switch except from "
       "the complement into the set"},
      {"custom", "caller-supplied ruled-out response vectors, one treatment label per instrument "
                 "value"},
  };
}

RunConfig worked_example_run_config() {
  const DGPSpec dgp = worked_example_dgp();
  RunConfig config;
  config.support = dgp.support;
  config.table = generate_observed(dgp).to_cells();
  config.restriction = make_restriction(Preset::ordered_monotone, dgp.support);
  config.checks.feasibility = true;
  config.checks.flow = true;
  config.checks.fosd = true;
  config.checks.ordered_bounds = true;
  return config;
}

}  // namespace ivfalsify
