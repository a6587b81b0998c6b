#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "triehh/analysis.hpp"
#include "triehh/dataset.hpp"
#include "triehh/protocol.hpp"

namespace triehh {

/// A battery of repeated seeded runs over one dataset.
struct ExperimentSpec {
  enum class Mode { kSingleWord, kMultiWord };

  Mode mode = Mode::kSingleWord;
  /// Explicit parameters, or empty to derive them from (epsilon, delta_mode,
  /// max_length) and the dataset's population size.
  std::optional<PrivacyParams> params;
  double epsilon = 2.0;
  DeltaMode delta_mode = DeltaMode::inv_n_squared();
  std::size_t max_length = 10;

  std::uint32_t runs = 20;
  std::vector<std::uint32_t> top_k = {10, 25, 50, 100};
  std::uint64_t base_seed = 1;  // run r uses seed base_seed + r
  unsigned threads = 0;         // 0: hardware concurrency
};

struct MetricStat {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sample std / sqrt(runs)
};

struct MetricsAtK {
  std::uint32_t k = 0;
  MetricStat precision;
  MetricStat recall;
  MetricStat f1;
};

struct MetricsReport {
  static constexpr int kSchemaVersion = 1;

  PrivacyParams params;
  ExperimentSpec::Mode mode = ExperimentSpec::Mode::kSingleWord;
  std::uint32_t runs = 0;
  std::uint64_t base_seed = 0;
  std::vector<MetricsAtK> by_k;
  /// Fraction of runs that discovered each word, for the union of the top-K
  /// truth words and everything ever discovered.
  std::map<std::string, double> word_discovery;
  /// Worst-case rates for the same words (single-word mode only):
  /// occurrences = ceil(F(w) * n), exponent = |w|.
  std::map<std::string, double> word_theory;
  /// Prefixes added with fewer than theta logged votes across all runs.
  /// Always zero unless the voting step is broken.
  std::uint64_t kanonymity_violations = 0;
  double mean_rounds = 0.0;
  /// Wall-clock; deliberately excluded from to_json to keep outputs
  /// byte-stable.
  double elapsed_seconds = 0.0;

  nlohmann::json to_json() const;
  /// Flat rows: k,metric,mean,ci_half_width.
  void write_csv(std::ostream& out) const;
};

/// The K most frequent words by population frequency, ties broken
/// lexicographically.
std::vector<std::string> truth_top_k(const UserDataset& dataset, std::uint32_t k);

/// Runs `spec.runs` independent seeded protocol executions (worker pool) and
/// aggregates precision/recall/F1 against the top-K truth sets with 0.95
/// normal-approximation confidence intervals. Identical specs give identical
/// reports.
MetricsReport run_battery(const UserDataset& dataset, const ExperimentSpec& spec);

/// One frequency bucket of the discovery-rate curve.
struct CurvePoint {
  double freq_lo = 0.0;
  double freq_hi = 0.0;
  std::size_t words = 0;     // dataset words in the bucket
  double empirical = 0.0;    // mean per-word discovery frequency
  double theoretical = 0.0;  // mean per-word worst-case rate
  double sigma = 0.0;        // binomial sd of the empirical bucket mean
};

/// Buckets every dataset word by population frequency and reports empirical
/// vs. worst-case discovery rates per bucket. bin_edges must be ascending;
/// bucket i covers [edges[i], edges[i+1]) and the last bucket is inclusive.
std::vector<CurvePoint> discovery_curve(const UserDataset& dataset, const ExperimentSpec& spec,
                                        const std::vector<double>& bin_edges);

/// Rows: freq_lo,freq_hi,words,empirical_rate,theoretical_rate,sigma.
void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);

}  // namespace triehh
