// Command-line entry point. `test` runs the configured checks on an observed
// law and reports; `simulate` emits the exact law (and optionally a record
// multiset) of a declared process; `selfcheck` cross-validates the solvers
// against independent routes; `presets` lists the built-in restrictions.
//
// Exit codes: 0 = success / not falsified, 2 = falsified (or a selfcheck
// disagreement), 1 = input error, 3 = internal cross-check failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "ivfalsify/config.hpp"
#include "ivfalsify/runner.hpp"
#include "ivfalsify/simulate.hpp"

namespace {

using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

void deliver(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

// A run config may point at a record file instead of embedding the text;
// the reference is resolved against the config file's directory and inlined
// before parsing.
std::string inline_records_path(std::string config_text, const std::string& config_path) {
  if (config_text.find("records_path") == std::string::npos) return config_text;
  ordered_json doc;
  try {
    doc = ordered_json::parse(config_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records_path")) return config_text;
  if (!doc["records_path"].is_string()) {
    throw std::invalid_argument("config: records_path: expected a path string");
  }
  std::filesystem::path records = doc["records_path"].get<std::string>();
  if (records.is_relative()) {
    records = std::filesystem::path(config_path).parent_path() / records;
  }
  doc.erase("records_path");
  doc["records_text"] = slurp(records.string());
  return doc.dump();
}

struct TestOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "text";
  std::optional<long> cap_types;
  std::optional<long> cap_subsets;
};

int cmd_test(const TestOptions& o) {
  try {
    const std::string text = inline_records_path(slurp(o.config_path), o.config_path);
    ivfalsify::RunConfig config = ivfalsify::parse_run_config(text);
    if (o.cap_types) config.caps.types = *o.cap_types;
    if (o.cap_subsets) config.caps.subsets = *o.cap_subsets;
    const ivfalsify::Report report = ivfalsify::run(config);
    deliver(o.format == "structured" ? report.document : report.text, o.out_path);
    return report.falsified ? 2 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct SimulateOptions {
  std::string preset;
  std::string config_path;
  bool random = false;
  std::uint64_t seed = 1;
  int treatments = 2;
  int instruments = 2;
  int bins = 2;
  std::string restriction = "none";
  std::string out_path;
  std::string records_path;
  std::string dgp_path;
};

int cmd_simulate(const SimulateOptions& o) {
  try {
    const int modes = (o.preset.empty() ? 0 : 1) + (o.config_path.empty() ? 0 : 1) +
                      (o.random ? 1 : 0);
    if (modes != 1) {
      throw std::invalid_argument("choose exactly one of --preset, --config, --random");
    }

    ivfalsify::DGPSpec dgp;
    std::optional<ivfalsify::RunConfig> shell;
    if (!o.preset.empty()) {
      if (o.preset == "worked-example") {
        dgp = ivfalsify::worked_example_dgp();
        shell = ivfalsify::worked_example_run_config();
      } else if (o.preset == "worked-example-broken") {
        // The top treatment's outcome is forced into the low bin when the
        // instrument is on: treatment shares stay put, but the overlap
        // ceiling empties and every enabled route refutes the law.
        dgp = ivfalsify::worked_example_dgp();
        dgp.exclusion_break[{2, 1}] = 0;
        shell = ivfalsify::worked_example_run_config();
        shell->table = ivfalsify::generate_observed(dgp).to_cells();
      } else {
        throw std::invalid_argument("unknown preset '" + o.preset +
                                    "' (available: worked-example, worked-example-broken)");
      }
    } else if (!o.config_path.empty()) {
      dgp = ivfalsify::parse_dgp_config(slurp(o.config_path));
    } else {
      ivfalsify::RestrictionSpec restriction;
      restriction.preset = ivfalsify::preset_from_name(o.restriction);
      if (restriction.preset == ivfalsify::Preset::unordered_monotone ||
          restriction.preset == ivfalsify::Preset::custom) {
        throw std::invalid_argument(
            "random draws honor the self-contained presets only "
            "(none, no-defiers, ordered-monotone)");
      }
      dgp = ivfalsify::random_valid_dgp(o.seed, o.treatments, o.instruments, o.bins, restriction);
    }

    const ivfalsify::ObservedDistribution observed = ivfalsify::generate_observed(dgp);
    ivfalsify::RunConfig config;
    if (shell) {
      config = *shell;
    } else {
      config.support = dgp.support;
      config.table = observed.to_cells();
      if (o.config_path.empty() && o.restriction != "none") {
        config.restriction = ivfalsify::make_restriction(
            ivfalsify::preset_from_name(o.restriction), dgp.support);
      }
    }
    deliver(ivfalsify::run_config_json(config), o.out_path);

    if (!o.records_path.empty()) {
      std::ostringstream csv;
      csv << "y,x,z\n";
      for (const ivfalsify::Record& record :
           ivfalsify::records_realizing(observed, dgp.instrument_law)) {
        csv << record.y << "," << record.x << "," << record.z << "\n";
      }
      write_file(o.records_path, csv.str());
    }
    if (!o.dgp_path.empty()) write_file(o.dgp_path, ivfalsify::dgp_config_json(dgp));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct SelfcheckOptions {
  std::uint64_t seed = 1;
  long trials = 100;
};

int cmd_selfcheck(const SelfcheckOptions& o) {
  try {
    if (o.trials == 0) {
      std::cerr << "warning: 0 trials exercise nothing; the pass is trivial\n";
    }
    const ivfalsify::SelfCheckResult result = ivfalsify::selfcheck(o.seed, o.trials);
    std::cout << result.summary << "\n";
    return result.passed ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_presets() {
  for (const auto& [name, description] : ivfalsify::restriction_preset_catalog()) {
    std::cout << name << "\n    " << description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "decide whether an observed (outcome, treatment, instrument) law is consistent with "
      "instrument validity under a declared instrument-response restriction"};
  app.require_subcommand(1);

  TestOptions test_opts;
  CLI::App* test = app.add_subcommand("test", "run the configured checks on an observed law");
  test->add_option("--config", test_opts.config_path, "run configuration (JSON)")->required();
  test->add_option("--out", test_opts.out_path, "write the report here instead of stdout");
  test->add_option("--format", test_opts.format, "report rendering: text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  test->add_option("--cap-types", test_opts.cap_types, "response-type enumeration ceiling")
      ->check(CLI::PositiveNumber);
  test->add_option("--cap-subsets", test_opts.cap_subsets,
                   "instrument-subset ceiling for the overlap table")
      ->check(CLI::PositiveNumber);

  SimulateOptions sim_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "emit the exact law of a declared process");
  simulate->add_option("--preset", sim_opts.preset,
                       "built-in process: worked-example or worked-example-broken");
  simulate->add_option("--config", sim_opts.config_path, "process description (JSON)");
  simulate->add_flag("--random", sim_opts.random,
                     "draw a random process that satisfies --restriction");
  simulate->add_option("--seed", sim_opts.seed, "seed for --random")->capture_default_str();
  simulate->add_option("--treatments", sim_opts.treatments, "treatment count for --random")
      ->check(CLI::Range(2, 16))
      ->capture_default_str();
  simulate->add_option("--instruments", sim_opts.instruments, "instrument count for --random")
      ->check(CLI::Range(2, 12))
      ->capture_default_str();
  simulate->add_option("--bins", sim_opts.bins, "outcome bin count for --random")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  simulate->add_option("--restriction", sim_opts.restriction,
                       "preset the random process must satisfy")
      ->capture_default_str();
  simulate->add_option("--out", sim_opts.out_path,
                       "write the law (as a runnable config) here instead of stdout");
  simulate->add_option("--out-records", sim_opts.records_path,
                       "also write a record multiset realizing the law exactly (CSV)");
  simulate->add_option("--out-dgp", sim_opts.dgp_path,
                       "also write the process description (JSON)");

  SelfcheckOptions self_opts;
  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "cross-validate the solvers against independent routes");
  selfcheck->add_option("--seed", self_opts.seed, "trial stream seed")->capture_default_str();
  selfcheck->add_option("--trials", self_opts.trials, "random trial count")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  app.add_subcommand("presets", "list the built-in restriction presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (test->parsed()) return cmd_test(test_opts);
  if (simulate->parsed()) return cmd_simulate(sim_opts);
  if (selfcheck->parsed()) return cmd_selfcheck(self_opts);
  return cmd_presets();
}
