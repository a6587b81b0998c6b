// Command-line front end: every subcommand is a thin adapter over the core
// library (parse flags, call, serialize). Exit codes: 0 success, 1 flag or
// precondition error, 2 runtime failure. Errors go to stderr as one JSON line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triehh/analysis.hpp"
#include "triehh/harness.hpp"
#include "triehh/ingest.hpp"
#include "triehh/privacy.hpp"
#include "triehh/protocol.hpp"
#include "triehh/version.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

// ---------------------------------------------------------------------------

struct ParamsCmd {
  std::uint64_t n = 0;
  double epsilon = 2.0;
  std::size_t max_length = 10;
  std::string delta_mode = "invn2";
  std::string output;

  void run() const {
    const triehh::PrivacyParams params =
        triehh::choose_parameters(n, max_length, epsilon, triehh::DeltaMode::parse(delta_mode));
    write_output(output, params.to_json().dump(2) + "\n");
    std::cout << params.table_row() << "\n";
  }
};

struct SimulateCmd {
  std::string dataset_path;
  std::string mode = "single";
  std::uint32_t runs = 20;
  double epsilon = 2.0;
  std::string delta_mode = "invn2";
  std::size_t max_length = 0;  // 0: dataset maximum
  std::vector<std::uint32_t> top_k = {10, 25, 50, 100};
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string format = "json";
  std::string output;
  std::string plot_data_path;
  std::uint32_t plot_bins = 12;
  std::string report_runs_path;
  bool round_logs = false;

  void run() const {
    const triehh::UserDataset dataset = triehh::UserDataset::load_jsonl_file(dataset_path);
    triehh::ExperimentSpec spec;
    spec.mode = mode == "multi" ? triehh::ExperimentSpec::Mode::kMultiWord
                                : triehh::ExperimentSpec::Mode::kSingleWord;
    spec.runs = runs;
    spec.epsilon = epsilon;
    spec.delta_mode = triehh::DeltaMode::parse(delta_mode);
    spec.max_length = max_length == 0 ? dataset.max_sequence_length() : max_length;
    spec.top_k = top_k;
    spec.base_seed = seed;
    spec.threads = threads;

    const triehh::MetricsReport report = triehh::run_battery(dataset, spec);
    if (format == "csv") {
      std::ostringstream csv;
      report.write_csv(csv);
      write_output(output, csv.str());
    } else {
      write_output(output, report.to_json().dump(2) + "\n");
    }
    std::fprintf(stderr, "%u runs in %.2fs, mean %.1f rounds\n", report.runs,
                 report.elapsed_seconds, report.mean_rounds);

    if (!plot_data_path.empty()) {
      double lo = 1.0;
      double hi = 0.0;
      for (const auto& [word, f] : dataset.population_frequencies()) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      if (!(hi > 0.0)) throw std::runtime_error("dataset has no positive population frequency");
      std::vector<double> edges;
      const double expand = 1.0 + 1e-12;
      const double log_lo = std::log(lo / expand);
      const double log_hi = std::log(hi * expand);
      for (std::uint32_t b = 0; b <= plot_bins; ++b) {
        edges.push_back(std::exp(log_lo + (log_hi - log_lo) * b / plot_bins));
      }
      const auto curve = triehh::discovery_curve(dataset, spec, edges);
      std::ostringstream csv;
      triehh::write_curve_csv(curve, csv);
      write_output(plot_data_path, csv.str());
    }

    if (!report_runs_path.empty()) {
      const triehh::PrivacyParams params =
          spec.params ? *spec.params
                      : triehh::choose_parameters(dataset.n(), spec.max_length, spec.epsilon,
                                                  spec.delta_mode);
      triehh::RunOptions options;
      options.keep_round_logs = round_logs;
      std::ostringstream lines;
      for (std::uint32_t r = 0; r < runs; ++r) {
        const triehh::RunReport run =
            spec.mode == triehh::ExperimentSpec::Mode::kMultiWord
                ? triehh::run_multi_word(dataset, params, seed + r, options)
                : triehh::run_single_word(dataset, params, seed + r, options);
        lines << run.to_json().dump() << "\n";
      }
      write_output(report_runs_path, lines.str());
    }
  }
};

struct AnalyzeRateCmd {
  std::uint64_t n = 0;
  double epsilon = 2.0;
  std::string delta_mode = "invn2";
  std::size_t max_length = 10;
  double freq_min = 0.001;
  double freq_max = 0.05;
  std::uint32_t bins = 20;
  bool log_spacing = false;
  std::string output;

  void run() const {
    if (!(freq_min > 0.0) || !(freq_max > freq_min)) {
      throw std::invalid_argument("need 0 < freq-min < freq-max");
    }
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    const triehh::PrivacyParams params =
        triehh::choose_parameters(n, max_length, epsilon, triehh::DeltaMode::parse(delta_mode));
    std::ostringstream csv;
    csv << "frequency,rate\n";
    for (std::uint32_t b = 0; b < bins; ++b) {
      const double t = static_cast<double>(b) / (bins - 1);
      const double f = log_spacing
                           ? std::exp(std::log(freq_min) + t * std::log(freq_max / freq_min))
                           : freq_min + t * (freq_max - freq_min);
      triehh::DiscoveryQuery query{n, params.batch_size, params.theta,
                                   triehh::occurrences_from_frequency(f, n), max_length};
      csv << format_double(f) << ',' << format_double(triehh::discovery_rate(query)) << '\n';
    }
    write_output(output, csv.str());
  }
};

struct MinPopCmd {
  std::vector<double> freqs;
  double target_rate = 0.9;
  double epsilon = 2.0;
  std::size_t max_length = 10;
  std::string delta_mode = "invn2";
  std::uint64_t cap = 1'000'000'000ULL;
  std::string output;

  void run() const {
    const triehh::DeltaMode mode = triehh::DeltaMode::parse(delta_mode);
    std::ostringstream csv;
    csv << "frequency,min_population\n";
    for (double f : freqs) {
      const std::uint64_t n =
          triehh::min_population(f, target_rate, epsilon, max_length, mode, cap);
      csv << format_double(f) << ',' << n << '\n';
    }
    write_output(output, csv.str());
  }
};

struct IngestCmd {
  std::string input;
  std::string format = "auto";
  std::string oov_dict;
  bool top1 = false;
  std::size_t max_length = 10;
  bool keep_case = false;
  bool strip_punct = false;
  std::string output;

  void run() const {
    triehh::IngestConfig config;
    config.max_length = max_length;
    config.lowercase = !keep_case;
    config.strip_punctuation = strip_punct;
    config.oov_dictionary_path = oov_dict;
    config.selection = top1 ? triehh::IngestConfig::WordSelection::kTop1
                            : triehh::IngestConfig::WordSelection::kAll;
    std::string kind = format;
    if (kind == "auto") {
      kind = input.size() >= 6 && input.substr(input.size() - 6) == ".jsonl" ? "jsonl" : "csv";
    }
    const triehh::UserDataset dataset = kind == "jsonl" ? triehh::ingest_jsonl(input, config)
                                                        : triehh::ingest_csv(input, config);
    std::ostringstream lines;
    dataset.dump_jsonl(lines);
    write_output(output, lines.str());
    std::size_t words = 0;
    for (const auto& user : dataset.users()) words += user.words().size();
    std::fprintf(stderr, "%zu users, %zu word entries, max length %zu\n", dataset.n(), words,
                 dataset.max_sequence_length());
  }
};

struct GenCmd {
  std::string fixture;
  std::uint64_t n = 0;
  std::uint64_t seed = 1;
  std::size_t words_per_user = 1;
  std::size_t max_length = 10;
  std::string output;

  void run() const {
    if (n == 0) throw std::invalid_argument("need at least one user (--n >= 1)");
    const triehh::FrequencyTable& table = triehh::fixture_table(fixture);
    const triehh::UserDataset dataset =
        triehh::generate_synthetic(table, n, words_per_user, seed, max_length);
    std::ostringstream lines;
    dataset.dump_jsonl(lines);
    write_output(output, lines.str());
  }
};

// ---------------------------------------------------------------------------

json help_json(const CLI::App& app) {
  json j;
  j["name"] = app.get_name();
  j["description"] = app.get_description();
  json options = json::array();
  for (const CLI::Option* opt : app.get_options()) {
    options.push_back(json{{"name", opt->get_name()},
                           {"description", opt->get_description()},
                           {"required", opt->get_required()}});
  }
  j["options"] = std::move(options);
  json subcommands = json::array();
  for (const CLI::App* sub : app.get_subcommands({})) subcommands.push_back(help_json(*sub));
  j["subcommands"] = std::move(subcommands);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated heavy-hitters discovery: protocol simulator, privacy parameter "
               "calculator and experiment harness"};
  app.set_version_flag("--version", triehh::kVersion);
  app.require_subcommand(0, 1);
  app.add_flag_callback(
      "--help-json", [&app] { throw CLI::CallForHelp(); },
      "Print a machine-readable description of all subcommands and exit");

  ParamsCmd params_cmd;
  SimulateCmd simulate_cmd;
  AnalyzeRateCmd analyze_cmd;
  MinPopCmd minpop_cmd;
  IngestCmd ingest_cmd;
  GenCmd gen_cmd;
  const CLI::App* selected = nullptr;

  CLI::App* params = app.add_subcommand("params", "Derive protocol parameters for a privacy target");
  params->add_option("--n", params_cmd.n, "Population size")->required();
  params->add_option("--epsilon", params_cmd.epsilon, "Privacy budget epsilon");
  params->add_option("--max-length", params_cmd.max_length, "Longest sequence incl. EOS (L)");
  params->add_option("--delta-mode", params_cmd.delta_mode,
                     "Failure target: inv300n, invn2 or explicit=<delta>");
  params->add_option("--output", params_cmd.output, "Write the JSON here instead of stdout");
  params->callback([&] { selected = params; });

  CLI::App* simulate = app.add_subcommand("simulate", "Run a battery of seeded protocol executions");
  simulate->add_option("--dataset", simulate_cmd.dataset_path, "Dataset JSONL (see `ingest`/`gen`)")
      ->required();
  simulate->add_option("--mode", simulate_cmd.mode, "single (one word per user) or multi")
      ->check(CLI::IsMember({"single", "multi"}));
  simulate->add_option("--runs", simulate_cmd.runs, "Number of independent runs");
  simulate->add_option("--epsilon", simulate_cmd.epsilon, "Privacy budget epsilon");
  simulate->add_option("--delta-mode", simulate_cmd.delta_mode,
                       "Failure target: inv300n, invn2 or explicit=<delta>");
  simulate->add_option("--max-length", simulate_cmd.max_length,
                       "Protocol length bound L (default: dataset maximum)");
  simulate->add_option("--top-k", simulate_cmd.top_k, "Truth-set sizes for the metrics");
  simulate->add_option("--seed", simulate_cmd.seed, "Base seed; run r uses seed+r");
  simulate->add_option("--threads", simulate_cmd.threads, "Worker threads (0: hardware)");
  simulate->add_option("--format", simulate_cmd.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--output", simulate_cmd.output, "Report destination (default stdout)");
  simulate->add_option("--emit-plot-data", simulate_cmd.plot_data_path,
                       "Also write a frequency-vs-discovery-rate CSV here");
  simulate->add_option("--plot-bins", simulate_cmd.plot_bins, "Buckets for --emit-plot-data");
  simulate->add_option("--report-runs", simulate_cmd.report_runs_path,
                       "Also write one RunReport JSON line per run here");
  simulate->add_flag("--round-logs", simulate_cmd.round_logs,
                     "Keep per-round logs in --report-runs output");
  simulate->callback([&] { selected = simulate; });

  CLI::App* analyze = app.add_subcommand("analyze-rate",
                                         "Worst-case discovery rate as a function of frequency");
  analyze->add_option("--n", analyze_cmd.n, "Population size")->required();
  analyze->add_option("--epsilon", analyze_cmd.epsilon, "Privacy budget epsilon");
  analyze->add_option("--delta-mode", analyze_cmd.delta_mode,
                      "Failure target: inv300n, invn2 or explicit=<delta>");
  analyze->add_option("--max-length", analyze_cmd.max_length, "Sequence length bound L");
  analyze->add_option("--freq-min", analyze_cmd.freq_min, "Lowest frequency");
  analyze->add_option("--freq-max", analyze_cmd.freq_max, "Highest frequency");
  analyze->add_option("--bins", analyze_cmd.bins, "Number of frequency points");
  analyze->add_flag("--log-spacing", analyze_cmd.log_spacing, "Space points geometrically");
  analyze->add_option("--output", analyze_cmd.output, "CSV destination (default stdout)");
  analyze->callback([&] { selected = analyze; });

  CLI::App* minpop = app.add_subcommand("min-pop",
                                        "Smallest population reaching a target discovery rate");
  minpop->add_option("--freq", minpop_cmd.freqs, "Sequence frequency (repeatable)")->required();
  minpop->add_option("--target-rate", minpop_cmd.target_rate, "Required worst-case rate");
  minpop->add_option("--epsilon", minpop_cmd.epsilon, "Privacy budget epsilon");
  minpop->add_option("--max-length", minpop_cmd.max_length, "Sequence length bound L");
  minpop->add_option("--delta-mode", minpop_cmd.delta_mode,
                     "Failure target: inv300n, invn2 or explicit=<delta>");
  minpop->add_option("--cap", minpop_cmd.cap, "Give up above this population size");
  minpop->add_option("--output", minpop_cmd.output, "CSV destination (default stdout)");
  minpop->callback([&] { selected = minpop; });

  CLI::App* ingest = app.add_subcommand("ingest", "Build a dataset from a corpus file");
  ingest->add_option("--input", ingest_cmd.input, "Corpus path")->required();
  ingest->add_option("--format", ingest_cmd.format, "Input layout")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  ingest->add_option("--oov-dict", ingest_cmd.oov_dict,
                     "Dictionary file (one word per line); listed words are dropped");
  ingest->add_flag("--top1", ingest_cmd.top1, "Keep only each user's most frequent word");
  ingest->add_option("--max-length", ingest_cmd.max_length, "Stored length bound incl. EOS");
  ingest->add_flag("--keep-case", ingest_cmd.keep_case, "Skip lowercasing");
  ingest->add_flag("--strip-punct", ingest_cmd.strip_punct,
                   "Strip surrounding punctuation from tokens");
  ingest->add_option("--output", ingest_cmd.output, "Dataset JSONL destination (default stdout)");
  ingest->callback([&] { selected = ingest; });

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic dataset from a bundled fixture");
  gen->add_option("--fixture", gen_cmd.fixture, "sentiment140-top100 or oov-top100")->required();
  gen->add_option("--n", gen_cmd.n, "Number of users")->required();
  gen->add_option("--seed", gen_cmd.seed, "Generator seed");
  gen->add_option("--words-per-user", gen_cmd.words_per_user, "Draws per user");
  gen->add_option("--max-length", gen_cmd.max_length, "Truncate words to this length incl. EOS");
  gen->add_option("--output", gen_cmd.output, "Dataset JSONL destination (default stdout)");
  gen->callback([&] { selected = gen; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    // --help-json reuses the help exit path with the JSON body.
    bool json_help = app.count("--help-json") > 0;
    std::cout << (json_help ? help_json(app).dump(2) + "\n" : app.help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "validation"}}.dump() << "\n";
    return 1;
  }

  if (selected == nullptr) {
    std::cout << app.help();
    return 0;
  }

  try {
    if (selected == params) params_cmd.run();
    if (selected == simulate) simulate_cmd.run();
    if (selected == analyze) analyze_cmd.run();
    if (selected == minpop) minpop_cmd.run();
    if (selected == ingest) ingest_cmd.run();
    if (selected == gen) gen_cmd.run();
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "validation"}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "runtime"}}.dump() << "\n";
    return 2;
  }
  return 0;
}
