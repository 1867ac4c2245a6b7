#include "ivfalsify/runner.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "ivfalsify/feasibility.hpp"
#include "ivfalsify/flownet.hpp"
#include "ivfalsify/fosd.hpp"
#include "ivfalsify/psi.hpp"
#include "ivfalsify/rng.hpp"
#include "ivfalsify/submono.hpp"

namespace ivfalsify {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSharpBinary =
    "binary instrument: the enabled conditions are jointly sharp — a law passes them exactly "
    "when some process satisfying the declared restriction generates it";
constexpr const char* kNecessaryOnly =
    "more than two instrument values: the implemented conditions are necessary only — passing "
    "does not certify that a valid process exists";
constexpr const char* kPartitionNote =
    "all conclusions are relative to the declared outcome bins; refining the outcome partition "
    "can only strengthen a refutation, never retract one";

long type_space_size(int L, int K, long cap) {
  long size = 1;
  for (int k = 0; k < K; ++k) {
    if (size > cap / L + 1) return cap + 1;
    size *= L;
  }
  return size;
}

std::vector<std::string> labels_of(const Support& support, const std::vector<int>& treatments) {
  std::vector<std::string> out;
  for (int x : treatments) out.push_back(support.treatments.at(x));
  return out;
}

ordered_json law_json(const ObservedDistribution& d) {
  ordered_json cells = ordered_json::array();
  for (const Cell& cell : d.to_cells()) {
    ordered_json c;
    c["z"] = d.support().instruments[cell.instrument];
    c["x"] = d.support().treatments[cell.treatment];
    c["y"] = d.support().outcome_bins[cell.bin].label;
    c["mass"] = format_rational(cell.mass);
    cells.push_back(std::move(c));
  }
  return cells;
}

ordered_json restriction_json(const RestrictionSpec& restriction, const Support& support) {
  ordered_json r;
  r["preset"] = preset_name(restriction.preset);
  ordered_json ruled = ordered_json::array();
  for (const auto& response : restriction.ruled_out) {
    ruled.push_back(labels_of(support, response));
  }
  r["ruled_out"] = std::move(ruled);
  r["extra_rows"] = restriction.extra_rows.size();
  if (!restriction.promoted.empty()) r["promoted"] = labels_of(support, restriction.promoted);
  return r;
}

ordered_json system_result_json(const LinearSystem& system, const FeasibilityResult& result,
                                const TypeSpace& types, const Support& support) {
  ordered_json out;
  out["ran"] = true;
  out["rows"] = system.rows.size();
  out["feasible"] = result.feasible;
  if (result.feasible) {
    ordered_json witness = ordered_json::array();
    for (long t = 0; t < types.size(); ++t) {
      if (result.witness[t] == 0) continue;
      ordered_json entry;
      entry["type"] = types.describe(t, support);
      entry["mass"] = format_rational(result.witness[t]);
      witness.push_back(std::move(entry));
    }
    out["witness"] = std::move(witness);
  } else {
    const FarkasCertificate& cert = *result.certificate;
    ordered_json weights = ordered_json::array();
    for (std::size_t i = 0; i < cert.weights.size(); ++i) {
      if (cert.weights[i] == 0) continue;
      ordered_json entry;
      entry["row"] = system.rows[i].label;
      entry["kind"] = row_kind_name(system.rows[i].kind);
      entry["weight"] = format_rational(cert.weights[i]);
      weights.push_back(std::move(entry));
    }
    ordered_json certificate;
    certificate["weights"] = std::move(weights);
    certificate["uses"] = cert.violated_labels;
    out["certificate"] = std::move(certificate);
  }
  return out;
}

ordered_json inequality_json(const InequalityRecord& record, const Support& support) {
  ordered_json out;
  out["part"] = record.part;
  out["S"] = labels_of(support, record.set_s);
  if (record.part == 2) {
    out["lambda"] = labels_of(support, record.lambda);
    out["lambda_prime"] = labels_of(support, record.lambda_prime);
  }
  out["lhs"] = format_rational(record.lhs);
  out["rhs"] = format_rational(record.rhs);
  return out;
}

ordered_json skipped(const std::string& reason) {
  ordered_json out;
  out["ran"] = false;
  out["skipped"] = reason;
  return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string render_text(const ordered_json& doc);

}  // namespace

Report run(const RunConfig& config) {
  config.support.validate();
  ObservedDistribution full =
      config.table.empty() ? ObservedDistribution::from_csv(config.support, config.records_text)
                           : ObservedDistribution::from_cells(config.support, config.table);
  const ObservedDistribution d =
      config.binarize_at ? full.binarize(config.support.treatment_index(*config.binarize_at))
                         : std::move(full);
  const Support& support = d.support();
  const int L = support.n_treatments();
  const int K = support.n_instruments();
  const bool binary = K == 2;
  const RestrictionSpec restriction = effective_restriction(config.restriction, support);

  if ((config.checks.flow || config.checks.fosd || config.checks.submono_harness) && !binary) {
    throw std::invalid_argument("flow, fosd, and submono_harness need a binary instrument");
  }
  if (config.checks.ordered_bounds && (!binary || !support.treatments_ordered)) {
    throw std::invalid_argument(
        "ordered_bounds needs a binary instrument and an ordered treatment support");
  }

  ordered_json doc;
  ordered_json inputs;
  ordered_json support_json;
  ordered_json bins = ordered_json::array();
  for (const OutcomeBin& bin : support.outcome_bins) bins.push_back(bin.label);
  support_json["outcome_bins"] = std::move(bins);
  support_json["treatments"] = support.treatments;
  support_json["instruments"] = support.instruments;
  support_json["treatments_ordered"] = support.treatments_ordered;
  inputs["support"] = std::move(support_json);
  if (config.binarize_at) inputs["binarize_at"] = *config.binarize_at;
  inputs["restriction"] = restriction_json(restriction, support);
  ordered_json caps;
  caps["types"] = config.caps.types;
  caps["subsets"] = config.caps.subsets;
  caps["part1"] = config.caps.part1;
  caps["part2"] = config.caps.part2;
  caps["submono"] = config.caps.submono;
  inputs["caps"] = std::move(caps);
  doc["inputs"] = std::move(inputs);
  doc["law"] = law_json(d);

  std::vector<std::string> notes;
  bool falsified = false;

  // Overlap ceilings: binwise minimum mass both instrument arms must share.
  std::vector<Rational> psi;
  if (binary) {
    ordered_json overlap = ordered_json::array();
    for (int x = 0; x < L; ++x) {
      psi.push_back(psi_mass(d, x, {0, 1}));
      ordered_json entry;
      entry["treatment"] = support.treatments[x];
      ordered_json per_bin = ordered_json::array();
      for (const Rational& m : pointwise_min(d, x, {0, 1})) per_bin.push_back(format_rational(m));
      entry["per_bin"] = std::move(per_bin);
      entry["total"] = format_rational(psi.back());
      overlap.push_back(std::move(entry));
    }
    doc["overlap"] = std::move(overlap);
  }

  const long type_count = type_space_size(L, K, config.caps.types);
  const bool types_ok = type_count <= config.caps.types;
  ordered_json checks = ordered_json::object();

  std::optional<bool> lp_feasible;
  if (config.checks.feasibility) {
    if (!types_ok) {
      const std::string reason = "response-type space exceeds the cap of " +
                                 std::to_string(config.caps.types) + "; feasibility skipped";
      checks["feasibility"] = skipped(reason);
      notes.push_back(reason);
    } else {
      const TypeSpace types(L, K, config.caps.types);
      LinearSystem system = build_consistency_system(d, types);
      system.append(build_restriction_rows(types, support, restriction));
      if (binary) system.append(build_always_taker_rows(d, types));
      const FeasibilityResult result = solve_feasibility(system);
      lp_feasible = result.feasible;
      checks["feasibility"] = system_result_json(system, result, types, support);
      if (!result.feasible) falsified = true;
    }
  }

  if (config.checks.flow) {
    if (!restriction.extra_rows.empty()) {
      const std::string reason = "extra inequality rows have no transportation form; flow skipped";
      checks["flow"] = skipped(reason);
      notes.push_back(reason);
    } else {
      FlowNetwork net = build_network(d, restriction, /*exclusion_caps=*/true);
      const Rational value = max_flow(net);
      const bool feasible = value == 1;
      ordered_json out;
      out["ran"] = true;
      out["value"] = format_rational(value);
      out["feasible"] = feasible;
      if (feasible) {
        if (types_ok) {
          const TypeSpace types(L, 2, config.caps.types);
          const TypeDistribution dist = flow_to_distribution(net, types);
          ordered_json witness = ordered_json::array();
          for (long t = 0; t < types.size(); ++t) {
            if (dist[t] == 0) continue;
            ordered_json entry;
            entry["type"] = types.describe(t, support);
            entry["mass"] = format_rational(dist[t]);
            witness.push_back(std::move(entry));
          }
          out["witness"] = std::move(witness);
        }
      } else {
        const Cut cut = min_cut(net);
        ordered_json cut_json;
        cut_json["capacity"] = format_rational(cut.capacity);
        cut_json["source_side"] = cut.source_side;
        ordered_json crossing = ordered_json::array();
        for (const FlowEdge& edge : cut.crossing) {
          ordered_json e;
          e["from"] = net.node_name(edge.from);
          e["to"] = net.node_name(edge.to);
          e["capacity"] = format_rational(edge.capacity);
          crossing.push_back(std::move(e));
        }
        cut_json["crossing"] = std::move(crossing);
        out["min_cut"] = std::move(cut_json);
        falsified = true;
      }
      checks["flow"] = std::move(out);
      if (lp_feasible.has_value() && *lp_feasible != feasible) {
        throw std::logic_error("internal disagreement: linear system and flow network differ");
      }
    }
  }

  if (config.checks.fosd) {
    if (L > config.caps.part1 || L > config.caps.part2) {
      const std::string reason = "treatment count exceeds the dominance enumeration caps (" +
                                 std::to_string(config.caps.part1) + "/" +
                                 std::to_string(config.caps.part2) + "); fosd skipped";
      checks["fosd"] = skipped(reason);
      notes.push_back(reason);
    } else {
      if (!restriction.extra_rows.empty()) {
        notes.push_back("the dominance family reflects ruled-out types only; extra rows are "
                        "checked by the linear system alone");
      }
      const BinaryRelation rel = BinaryRelation::from_restriction(restriction, L);
      const std::vector<InequalityRecord> part1 = enumerate_part1(d, rel, config.caps.part1);
      const std::vector<InequalityRecord> part2 = enumerate_part2(d, rel, psi, config.caps.part2);
      const DominanceCase verdict = classify(part1, part2);

      ordered_json out;
      out["ran"] = true;
      out["case"] = static_cast<int>(verdict);
      out["case_name"] = verdict == DominanceCase::consistent         ? "consistent"
                         : verdict == DominanceCase::overlap_violation ? "overlap_violation"
                                                                       : "share_violation";
      std::vector<std::vector<std::string>> attribution;
      const auto emit_part = [&](const char* key, const std::vector<InequalityRecord>& records) {
        ordered_json part;
        part["total"] = records.size();
        ordered_json violated = ordered_json::array();
        for (const InequalityRecord& record : records) {
          if (!record.violated) continue;
          violated.push_back(inequality_json(record, support));
          std::vector<std::string> s = labels_of(support, record.set_s);
          if (std::find(attribution.begin(), attribution.end(), s) == attribution.end()) {
            attribution.push_back(std::move(s));
          }
        }
        part["violated"] = std::move(violated);
        out[key] = std::move(part);
      };
      emit_part("part1", part1);
      emit_part("part2", part2);
      checks["fosd"] = std::move(out);

      ordered_json classification;
      classification["case"] = static_cast<int>(verdict);
      classification["name"] = checks["fosd"]["case_name"];
      classification["attribution"] = attribution;
      doc["classification"] = std::move(classification);
      if (verdict != DominanceCase::consistent) falsified = true;
    }
  }

  if (config.checks.ordered_bounds) {
    const OrderedBoundReport bounds = ordered_upper_set_bounds(d, psi);
    ordered_json out;
    out["ran"] = true;
    out["total"] = bounds.records.size();
    ordered_json violated = ordered_json::array();
    for (const OrderedBoundRecord& record : bounds.records) {
      if (!record.violated) continue;
      ordered_json entry;
      entry["treatment"] = support.treatments[record.treatment];
      entry["lhs"] = format_rational(record.lhs);
      entry["rhs"] = format_rational(record.rhs);
      violated.push_back(std::move(entry));
      falsified = true;
    }
    out["violated"] = std::move(violated);
    out["note"] = bounds.note;
    checks["ordered_bounds"] = std::move(out);
  }

  if (config.checks.sufficient_takers) {
    if (!types_ok) {
      const std::string reason = "response-type space exceeds the cap of " +
                                 std::to_string(config.caps.types) +
                                 "; sufficient_takers skipped";
      checks["sufficient_takers"] = skipped(reason);
      notes.push_back(reason);
    } else {
      try {
        const PsiTable table = build_psi_table(d, K, config.caps.subsets);
        const TypeSpace types(L, K, config.caps.types);
        LinearSystem system = build_consistency_system(d, types);
        system.append(build_restriction_rows(types, support, restriction));
        system.append(build_sufficient_taker_rows(d, types, table));
        const FeasibilityResult result = solve_feasibility(system);
        ordered_json out = system_result_json(system, result, types, support);
        ordered_json overlap = ordered_json::array();
        for (const PsiEntry& entry : table.entries()) {
          ordered_json e;
          e["treatment"] = support.treatments[entry.treatment];
          std::vector<std::string> subset;
          for (int z : entry.instruments) subset.push_back(support.instruments[z]);
          e["instruments"] = subset;
          e["total"] = format_rational(entry.total);
          overlap.push_back(std::move(e));
        }
        out["overlap_table"] = std::move(overlap);
        checks["sufficient_takers"] = std::move(out);
        if (!result.feasible) falsified = true;
      } catch (const std::invalid_argument& err) {
        const std::string reason = std::string("sufficient_takers skipped: ") + err.what();
        checks["sufficient_takers"] = skipped(reason);
        notes.push_back(reason);
      }
    }
  }

  if (config.checks.submono_harness) {
    if (L > config.caps.submono) {
      const std::string reason = "treatment count exceeds the ranking-harness cap of " +
                                 std::to_string(config.caps.submono) +
                                 "; submono_harness skipped";
      checks["submono_harness"] = skipped(reason);
      notes.push_back(reason);
    } else {
      const BinaryRelation rel = BinaryRelation::from_restriction(restriction, L);
      const LemmaReport lemma = lemma_harness(L, {rel}, 1);
      ordered_json out;
      out["ran"] = true;
      out["all_passed"] = lemma.all_passed;
      ordered_json parts = ordered_json::array();
      for (const LemmaCheck& part : lemma.parts) {
        ordered_json p;
        p["name"] = part.name;
        p["passed"] = part.passed;
        p["cases"] = part.cases;
        parts.push_back(std::move(p));
      }
      out["parts"] = std::move(parts);
      bool minimality_ok = true;
      if (rel.pair_count() > 0 && rel.pair_count() <= 12) {
        const MinimalityReport minimality = minimality_witnesses({rel});
        minimality_ok = minimality.all_passed;
        ordered_json m;
        m["all_passed"] = minimality.all_passed;
        m["witnesses"] = minimality.witnesses;
        out["minimality"] = std::move(m);
      }
      const RelationSplit split = split_relation(rel);
      if (!split.reflexive.empty()) {
        ordered_json constant = ordered_json::array();
        for (int x : split.reflexive) constant.push_back(support.treatments[x]);
        out["unenforced_constant_types"] = std::move(constant);
        notes.push_back("ruled-out constant types are not enforced by the ranking discipline; "
                        "they bind only through the overlap ceilings");
      }
      checks["submono_harness"] = std::move(out);
      if (!lemma.all_passed || !minimality_ok) {
        throw std::logic_error("ranking-discipline self-check failed for the declared relation");
      }
    }
  }

  doc["checks"] = std::move(checks);
  notes.insert(notes.begin(), binary ? kSharpBinary : kNecessaryOnly);
  notes.push_back(kPartitionNote);
  doc["notes"] = notes;
  doc["falsified"] = falsified;

  Report report;
  report.falsified = falsified;
  report.document = doc.dump(2) + "\n";
  report.text = render_text(doc);
  return report;
}

namespace {

std::string render_text(const ordered_json& doc) {
  std::ostringstream os;
  const auto& inputs = doc["inputs"];
  const auto& support = inputs["support"];
  os << "falsification run: " << support["treatments"].size() << " treatments, "
     << support["outcome_bins"].size() << " outcome bins, " << support["instruments"].size()
     << " instrument values";
  if (inputs.contains("binarize_at")) {
    os << " (binarized at " << inputs["binarize_at"].get<std::string>() << ")";
  }
  os << "\n";
  const auto& restriction = inputs["restriction"];
  os << "restriction: " << restriction["preset"].get<std::string>() << " ("
     << restriction["ruled_out"].size() << " ruled-out types, "
     << restriction["extra_rows"].get<std::size_t>() << " extra rows)\n";

  if (doc.contains("overlap")) {
    os << "overlap ceilings:";
    for (const auto& entry : doc["overlap"]) {
      os << " " << entry["treatment"].get<std::string>() << "="
         << entry["total"].get<std::string>();
    }
    os << "\n";
  }
  os << "\n";

  const auto& checks = doc["checks"];
  for (const auto& [name, check] : checks.items()) {
    os << "[" << name << "] ";
    if (!check["ran"].get<bool>()) {
      os << "skipped: " << check["skipped"].get<std::string>() << "\n";
      continue;
    }
    if (name == "feasibility" || name == "sufficient_takers") {
      if (check["feasible"].get<bool>()) {
        os << "consistent — a distribution over allowed types reproduces the law ("
           << check["witness"].size() << " types carry mass)\n";
      } else {
        std::vector<std::string> uses;
        for (const auto& label : check["certificate"]["uses"]) {
          uses.push_back(label.get<std::string>());
        }
        os << "REFUTED — certificate combines: " << join(uses, ", ") << "\n";
      }
    } else if (name == "flow") {
      os << "value " << check["value"].get<std::string>();
      if (check["feasible"].get<bool>()) {
        os << " — consistent\n";
      } else {
        std::vector<std::string> side;
        for (const auto& node : check["min_cut"]["source_side"]) {
          side.push_back(node.get<std::string>());
        }
        os << " < 1 — REFUTED (min cut " << check["min_cut"]["capacity"].get<std::string>()
           << " from " << join(side, ", ") << ")\n";
      }
    } else if (name == "fosd") {
      os << "case " << check["case"].get<int>() << " (" << check["case_name"].get<std::string>()
         << "): " << check["part1"]["total"].get<std::size_t>() << " share comparisons ("
         << check["part1"]["violated"].size() << " violated), "
         << check["part2"]["total"].get<std::size_t>() << " partition bounds ("
         << check["part2"]["violated"].size() << " violated)\n";
    } else if (name == "ordered_bounds") {
      os << check["total"].get<std::size_t>() << " upper-set bounds, "
         << check["violated"].size() << " violated\n";
    } else if (name == "submono_harness") {
      os << (check["all_passed"].get<bool>() ? "all ranking-discipline claims hold"
                                             : "RANKING-DISCIPLINE CLAIMS FAILED")
         << " (" << check["parts"].size() << " claims checked)\n";
    }
  }

  if (doc.contains("classification")) {
    const auto& classification = doc["classification"];
    os << "\nclassification: case " << classification["case"].get<int>() << " ("
       << classification["name"].get<std::string>() << ")";
    if (!classification["attribution"].empty()) {
      os << "; implicated treatment sets:";
      for (const auto& s : classification["attribution"]) {
        std::vector<std::string> labels;
        for (const auto& label : s) labels.push_back(label.get<std::string>());
        os << " {" << join(labels, ",") << "}";
      }
    }
    os << "\n";
  }

  os << "\nverdict: " << (doc["falsified"].get<bool>() ? "FALSIFIED" : "NOT FALSIFIED") << "\n";
  os << "notes:\n";
  for (const auto& note : doc["notes"]) {
    os << "  - " << note.get<std::string>() << "\n";
  }
  return os.str();
}

// --- selfcheck helpers -----------------------------------------------------

Support plain_support(int L, int bins) {
  Support support;
  for (int b = 0; b < bins; ++b) support.outcome_bins.push_back({"y" + std::to_string(b), {}, {}});
  for (int x = 0; x < L; ++x) support.treatments.push_back("x" + std::to_string(x));
  support.instruments = {"z0", "z1"};
  support.treatments_ordered = true;
  return support;
}

// A random conditional law: `resolution` unit masses thrown into the
// (treatment, bin) grid per instrument arm.
ObservedDistribution random_law(SplitMix64& rng, const Support& support, long resolution) {
  const int L = support.n_treatments();
  const int B = support.n_bins();
  std::vector<Cell> cells;
  for (int z = 0; z < support.n_instruments(); ++z) {
    std::vector<long> counts(static_cast<std::size_t>(L) * B, 0);
    for (long i = 0; i < resolution; ++i) ++counts[rng.below(counts.size())];
    for (int x = 0; x < L; ++x) {
      for (int b = 0; b < B; ++b) {
        const long count = counts[static_cast<std::size_t>(x) * B + b];
        if (count > 0) cells.push_back({z, x, b, Rational(count) / resolution});
      }
    }
  }
  return ObservedDistribution::from_cells(support, cells);
}

RestrictionSpec random_pair_restriction(SplitMix64& rng, const Support& support) {
  std::vector<std::vector<int>> pairs;
  for (int a = 0; a < support.n_treatments(); ++a) {
    for (int b = 0; b < support.n_treatments(); ++b) {
      if (a != b && rng.chance(1, 3)) pairs.push_back({a, b});
    }
  }
  if (pairs.empty()) return make_restriction(Preset::none, support);
  return make_restriction(Preset::custom, support, {}, pairs);
}

LinearSystem assemble_system(const ObservedDistribution& d, const TypeSpace& types,
                             const RestrictionSpec& restriction, bool overlap_ceilings) {
  LinearSystem system = build_consistency_system(d, types);
  system.append(build_restriction_rows(types, d.support(), restriction));
  if (overlap_ceilings) system.append(build_always_taker_rows(d, types));
  return system;
}

bool dominance_holds(const std::vector<InequalityRecord>& records) {
  return std::none_of(records.begin(), records.end(),
                      [](const InequalityRecord& r) { return r.violated; });
}

// Curated laws with hand-verified verdicts, run end to end before the random
// trials. Each entry pins the final verdict and, where a classification is
// produced, the case number.
struct Fixture {
  std::string name;
  RunConfig config;
  bool expect_falsified = false;
  int expect_case = 0;  // 0 = the run carries no classification
};

std::vector<Fixture> fixture_bank() {
  std::vector<Fixture> bank;

  bank.push_back({"worked-example", worked_example_run_config(), false, 1});

  {
    RunConfig c = worked_example_run_config();
    c.binarize_at = "x2";
    c.restriction = RestrictionSpec{};
    c.restriction.preset = Preset::no_defiers;
    bank.push_back({"binarized-no-defiers", std::move(c), true, 2});
  }

  {
    // Forcing the top treatment's outcome into the low bin at z1 empties its
    // overlap ceiling while consistency still demands mass on its constant
    // type: every enabled route refutes, with the overlap case attributed.
    DGPSpec dgp = worked_example_dgp();
    dgp.exclusion_break[{2, 1}] = 0;
    RunConfig c = worked_example_run_config();
    c.table = generate_observed(dgp).to_cells();
    bank.push_back({"outcome-shift-detected", std::move(c), true, 2});
  }

  {
    // The same manipulation on the middle treatment leaves the full system
    // satisfiable; the run documents the detection limit by staying clean.
    DGPSpec dgp = worked_example_dgp();
    dgp.exclusion_break[{1, 1}] = 0;
    RunConfig c = worked_example_run_config();
    c.table = generate_observed(dgp).to_cells();
    bank.push_back({"outcome-shift-undetected", std::move(c), false, 1});
  }

  {
    // Treated share falls when the instrument turns on: with defiers ruled
    // out the share comparison itself fails, ahead of any overlap bound.
    RunConfig c;
    c.support = plain_support(2, 1);
    c.table = {{0, 0, 0, Rational(1, 4)},
               {0, 1, 0, Rational(3, 4)},
               {1, 0, 0, Rational(1, 2)},
               {1, 1, 0, Rational(1, 2)}};
    c.restriction.preset = Preset::no_defiers;
    c.checks.flow = true;
    c.checks.fosd = true;
    bank.push_back({"treated-share-drop", std::move(c), true, 3});
  }

  {
    // Three instrument values: the necessary-only route on a law generated
    // by a compliant process stays clean.
    const DGPSpec dgp = random_valid_dgp(99, 2, 3, 2, RestrictionSpec{});
    RunConfig c;
    c.support = dgp.support;
    c.table = generate_observed(dgp).to_cells();
    c.checks.sufficient_takers = true;
    bank.push_back({"three-instruments-valid", std::move(c), false, 0});
  }

  return bank;
}

std::optional<std::string> fixture_mismatch(const Fixture& fixture) {
  Report report;
  try {
    report = run(fixture.config);
  } catch (const std::exception& e) {
    return "fixture '" + fixture.name + "' failed to run: " + e.what();
  }
  if (report.falsified != fixture.expect_falsified) {
    return "fixture '" + fixture.name + "': expected " +
           (fixture.expect_falsified ? "falsified" : "not falsified") + ", got the opposite";
  }
  const ordered_json doc = ordered_json::parse(report.document);
  if (fixture.expect_case != 0) {
    if (!doc.contains("classification")) {
      return "fixture '" + fixture.name + "': expected a classification, none present";
    }
    const int got = doc["classification"]["case"].get<int>();
    if (got != fixture.expect_case) {
      return "fixture '" + fixture.name + "': expected case " +
             std::to_string(fixture.expect_case) + ", got case " + std::to_string(got);
    }
  }
  return std::nullopt;
}

}  // namespace

SelfCheckResult selfcheck(std::uint64_t seed, long trials) {
  if (trials == 0) {
    return {true, 0, "0 trials requested; nothing exercised (trivial pass)"};
  }

  const std::vector<Fixture> bank = fixture_bank();
  for (const Fixture& fixture : bank) {
    if (auto mismatch = fixture_mismatch(fixture)) return {false, 0, *mismatch};
  }

  SplitMix64 rng(seed);
  long equivalences = 0;
  long oracle_definite = 0;
  long oracle_unknown = 0;
  long soundness = 0;

  for (long trial = 0; trial < trials; ++trial) {
    const int L = 2 + static_cast<int>(rng.below(3));
    const int bins = 1 + static_cast<int>(rng.below(3));
    const Support support = plain_support(L, bins);
    const ObservedDistribution d = random_law(rng, support, 6 + static_cast<long>(rng.below(7)));
    const RestrictionSpec restriction = random_pair_restriction(rng, support);
    const TypeSpace types(L, 2);

    // Leg 1: linear system vs flow vs dominance family, without and with
    // the overlap ceilings.
    const BinaryRelation rel = BinaryRelation::from_restriction(restriction, L);
    std::vector<Rational> psi;
    for (int x = 0; x < L; ++x) psi.push_back(psi_mass(d, x, {0, 1}));

    for (const bool ceilings : {false, true}) {
      const LinearSystem system = assemble_system(d, types, restriction, ceilings);
      const FeasibilityResult lp = solve_feasibility(system);
      FlowNetwork net = build_network(d, restriction, ceilings);
      const bool flow_ok = max_flow(net) == 1;
      bool family_ok = dominance_holds(enumerate_part1(d, rel));
      if (ceilings) family_ok = family_ok && dominance_holds(enumerate_part2(d, rel, psi));
      if (lp.feasible != flow_ok || lp.feasible != family_ok) {
        std::ostringstream os;
        os << "disagreement at trial " << trial << " (ceilings " << (ceilings ? "on" : "off")
           << "): system " << (lp.feasible ? "feasible" : "infeasible") << ", flow "
           << (flow_ok ? "feasible" : "infeasible") << ", dominance "
           << (family_ok ? "holds" : "violated");
        return {false, trial + 1, os.str()};
      }
      ++equivalences;

      // Leg 2: brute-force referee on the smallest instances, where the
      // resolution of the law makes the referee definite.
      if (L == 2 && bins <= 2) {
        boost::multiprecision::mpz_int denom(1);
        for (const Cell& cell : d.to_cells()) {
          denom = boost::multiprecision::lcm(
              denom, boost::multiprecision::mpz_int(denominator(cell.mass)));
        }
        const long resolution = denom.convert_to<long>();
        const OracleVerdict verdict = brute_force_oracle(system, resolution);
        if (verdict == OracleVerdict::unknown) {
          ++oracle_unknown;
        } else {
          ++oracle_definite;
          const bool oracle_feasible = verdict == OracleVerdict::feasible;
          if (oracle_feasible != lp.feasible) {
            std::ostringstream os;
            os << "solver/referee disagreement at trial " << trial << ": solver "
               << (lp.feasible ? "feasible" : "infeasible") << ", referee "
               << oracle_verdict_name(verdict);
            return {false, trial + 1, os.str()};
          }
        }
      }
    }

    // Leg 3: soundness — a law generated by a process that satisfies the
    // restriction is never falsified.
    const DGPSpec dgp = random_valid_dgp(rng.next(), L, 2, bins, restriction);
    const ObservedDistribution valid = generate_observed(dgp);
    const LinearSystem valid_system = assemble_system(valid, types, restriction, true);
    if (!solve_feasibility(valid_system).feasible) {
      return {false, trial + 1, "soundness failure at trial " + std::to_string(trial) +
                                    ": a valid process was falsified"};
    }
    std::vector<Rational> valid_psi;
    for (int x = 0; x < L; ++x) valid_psi.push_back(psi_mass(valid, x, {0, 1}));
    if (!dominance_holds(enumerate_part1(valid, rel)) ||
        !dominance_holds(enumerate_part2(valid, rel, valid_psi))) {
      return {false, trial + 1, "soundness failure at trial " + std::to_string(trial) +
                                    ": dominance family rejected a valid process"};
    }
    ++soundness;
  }

  std::ostringstream os;
  os << bank.size() << " fixture verdicts and " << trials << " trials: " << equivalences
     << " three-way equivalences, " << oracle_definite << " definite referee agreements ("
     << oracle_unknown << " indefinite), " << soundness << " soundness draws — all consistent";
  return {true, trials, os.str()};
}

}  // namespace ivfalsify
