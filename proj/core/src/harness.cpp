#include "triehh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace triehh {

namespace {

PrivacyParams resolve_params(const UserDataset& dataset, const ExperimentSpec& spec) {
  if (spec.params) {
    if (spec.params->n != dataset.n()) {
      throw std::invalid_argument("experiment parameters target a different population size");
    }
    return *spec.params;
  }
  return choose_parameters(dataset.n(), spec.max_length, spec.epsilon, spec.delta_mode);
}

RunReport execute_run(const UserDataset& dataset, const PrivacyParams& params,
                      ExperimentSpec::Mode mode, std::uint64_t seed) {
  RunOptions options;
  options.keep_round_logs = true;  // needed for the vote audit
  return mode == ExperimentSpec::Mode::kMultiWord ? run_multi_word(dataset, params, seed, options)
                                                  : run_single_word(dataset, params, seed, options);
}

/// Runs seeds base..base+runs-1 on a small worker pool; results come back in
/// seed order regardless of scheduling.
std::vector<RunReport> run_many(const UserDataset& dataset, const PrivacyParams& params,
                                ExperimentSpec::Mode mode, std::uint64_t base_seed,
                                std::uint32_t runs, unsigned threads) {
  if (runs < 1) throw std::invalid_argument("a battery needs at least one run");
  std::vector<RunReport> reports(runs);
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, runs);
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint32_t r = next.fetch_add(1);
      if (r >= runs) return;
      try {
        reports[r] = execute_run(dataset, params, mode, base_seed + r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

MetricStat summarize(const std::vector<double>& samples) {
  MetricStat stat;
  const double count = static_cast<double>(samples.size());
  for (double v : samples) stat.mean += v;
  stat.mean /= count;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - stat.mean) * (v - stat.mean);
    const double sd = std::sqrt(ss / (count - 1.0));
    stat.ci_half_width = 1.96 * sd / std::sqrt(count);
  }
  return stat;
}

std::uint64_t audit_votes(const RunReport& report) {
  std::uint64_t violations = 0;
  for (const RoundLog& log : report.rounds) {
    for (const std::string& prefix : log.added) {
      auto it = log.tally.votes.find(prefix);
      if (it == log.tally.votes.end() || it->second < report.protocol.theta) ++violations;
    }
  }
  return violations;
}

}  // namespace

std::vector<std::string> truth_top_k(const UserDataset& dataset, std::uint32_t k) {
  const auto freq = dataset.population_frequencies();
  std::vector<std::pair<std::string, double>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  ranked.resize(std::min<std::size_t>(k, ranked.size()));
  std::vector<std::string> words;
  words.reserve(ranked.size());
  for (auto& [word, f] : ranked) words.push_back(std::move(word));
  return words;
}

MetricsReport run_battery(const UserDataset& dataset, const ExperimentSpec& spec) {
  const auto started = std::chrono::steady_clock::now();
  if (spec.top_k.empty()) throw std::invalid_argument("top_k list must be non-empty");
  for (std::uint32_t k : spec.top_k) {
    if (k < 1) throw std::invalid_argument("top-K values must be at least 1");
  }

  MetricsReport report;
  report.params = resolve_params(dataset, spec);
  report.mode = spec.mode;
  report.runs = spec.runs;
  report.base_seed = spec.base_seed;

  const std::uint32_t max_k = *std::max_element(spec.top_k.begin(), spec.top_k.end());
  const std::vector<std::string> truth = truth_top_k(dataset, max_k);
  const auto population = dataset.population_frequencies();

  const std::vector<RunReport> runs =
      run_many(dataset, report.params, spec.mode, spec.base_seed, spec.runs, spec.threads);

  std::map<std::string, std::uint32_t> discovery_counts;
  for (const std::string& word : truth) discovery_counts[word] = 0;
  double total_rounds = 0.0;
  for (const RunReport& run : runs) {
    report.kanonymity_violations += audit_votes(run);
    total_rounds += run.rounds_executed;
    for (const std::string& word : run.discovered) ++discovery_counts[word];
  }
  report.mean_rounds = total_rounds / static_cast<double>(runs.size());
  for (const auto& [word, count] : discovery_counts) {
    report.word_discovery[word] = static_cast<double>(count) / static_cast<double>(runs.size());
  }

  if (spec.mode == ExperimentSpec::Mode::kSingleWord) {
    for (const auto& [word, rate] : report.word_discovery) {
      auto it = population.find(word);
      const double f = it == population.end() ? 0.0 : it->second;
      DiscoveryQuery query{dataset.n(), report.params.batch_size, report.params.theta,
                           occurrences_from_frequency(f, dataset.n()), word.size()};
      report.word_theory[word] = discovery_rate(query);
    }
  }

  for (std::uint32_t k : spec.top_k) {
    const std::unordered_set<std::string> truth_set(
        truth.begin(), truth.begin() + std::min<std::size_t>(k, truth.size()));
    std::vector<double> precision, recall, f1;
    precision.reserve(runs.size());
    recall.reserve(runs.size());
    f1.reserve(runs.size());
    for (const RunReport& run : runs) {
      std::size_t hits = 0;
      for (const std::string& word : run.discovered) hits += truth_set.count(word);
      const double p = run.discovered.empty()
                           ? 0.0
                           : static_cast<double>(hits) / static_cast<double>(run.discovered.size());
      const double r = static_cast<double>(hits) / static_cast<double>(k);
      precision.push_back(p);
      recall.push_back(r);
      f1.push_back(p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0);
    }
    MetricsAtK at_k;
    at_k.k = k;
    at_k.precision = summarize(precision);
    at_k.recall = summarize(recall);
    // The reported F1 is the harmonic mean of the reported precision and
    // recall; the CI width comes from the per-run F1 spread.
    at_k.f1 = summarize(f1);
    const double p_mean = at_k.precision.mean;
    const double r_mean = at_k.recall.mean;
    at_k.f1.mean = p_mean + r_mean > 0.0 ? 2.0 * p_mean * r_mean / (p_mean + r_mean) : 0.0;
    report.by_k.push_back(at_k);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<CurvePoint> discovery_curve(const UserDataset& dataset, const ExperimentSpec& spec,
                                        const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end())) {
    throw std::invalid_argument("bin edges must be an ascending list of at least two values");
  }
  const PrivacyParams params = resolve_params(dataset, spec);
  const auto population = dataset.population_frequencies();
  const std::vector<RunReport> runs =
      run_many(dataset, params, spec.mode, spec.base_seed, spec.runs, spec.threads);

  std::map<std::string, std::uint32_t> counts;
  for (const RunReport& run : runs) {
    for (const std::string& word : run.discovered) ++counts[word];
  }

  std::vector<CurvePoint> curve(bin_edges.size() - 1);
  std::vector<double> variance(curve.size(), 0.0);
  for (std::size_t b = 0; b < curve.size(); ++b) {
    curve[b].freq_lo = bin_edges[b];
    curve[b].freq_hi = bin_edges[b + 1];
  }
  for (const auto& [word, f] : population) {
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), f);
    std::size_t bin;
    if (it == bin_edges.begin()) continue;  // below the first edge
    bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
    if (bin >= curve.size()) {
      if (f == bin_edges.back()) {
        bin = curve.size() - 1;  // topmost edge is inclusive
      } else {
        continue;
      }
    }
    const auto hit = counts.find(word);
    const double empirical =
        hit == counts.end() ? 0.0
                            : static_cast<double>(hit->second) / static_cast<double>(runs.size());
    DiscoveryQuery query{dataset.n(), params.batch_size, params.theta,
                         occurrences_from_frequency(f, dataset.n()), word.size()};
    const double theory = discovery_rate(query);
    curve[bin].words += 1;
    curve[bin].empirical += empirical;
    curve[bin].theoretical += theory;
    variance[bin] += theory * (1.0 - theory);
  }
  for (std::size_t b = 0; b < curve.size(); ++b) {
    if (curve[b].words == 0) continue;
    const double count = static_cast<double>(curve[b].words);
    curve[b].empirical /= count;
    curve[b].theoretical /= count;
    curve[b].sigma = std::sqrt(variance[b] / static_cast<double>(spec.runs)) / count;
  }
  return curve;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json metrics = nlohmann::json::array();
  for (const MetricsAtK& at_k : by_k) {
    metrics.push_back(nlohmann::json{
        {"k", at_k.k},
        {"precision", {{"mean", at_k.precision.mean}, {"ci", at_k.precision.ci_half_width}}},
        {"recall", {{"mean", at_k.recall.mean}, {"ci", at_k.recall.ci_half_width}}},
        {"f1", {{"mean", at_k.f1.mean}, {"ci", at_k.f1.ci_half_width}}}});
  }
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"params", params.to_json()},
                   {"mode", mode == ExperimentSpec::Mode::kMultiWord ? "multi" : "single"},
                   {"runs", runs},
                   {"base_seed", base_seed},
                   {"metrics", std::move(metrics)},
                   {"word_discovery", word_discovery},
                   {"kanonymity_violations", kanonymity_violations},
                   {"mean_rounds", mean_rounds}};
  if (mode == ExperimentSpec::Mode::kSingleWord) j["word_theory"] = word_theory;
  return j;
}

void MetricsReport::write_csv(std::ostream& out) const {
  out << "k,metric,mean,ci_half_width\n";
  char buffer[160];
  for (const MetricsAtK& at_k : by_k) {
    const std::pair<const char*, const MetricStat*> rows[] = {
        {"precision", &at_k.precision}, {"recall", &at_k.recall}, {"f1", &at_k.f1}};
    for (const auto& [name, stat] : rows) {
      std::snprintf(buffer, sizeof buffer, "%u,%s,%.10g,%.10g\n", at_k.k, name, stat->mean,
                    stat->ci_half_width);
      out << buffer;
    }
  }
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "freq_lo,freq_hi,words,empirical_rate,theoretical_rate,sigma\n";
  char buffer[200];
  for (const CurvePoint& point : curve) {
    std::snprintf(buffer, sizeof buffer, "%.10g,%.10g,%zu,%.10g,%.10g,%.10g\n", point.freq_lo,
                  point.freq_hi, point.words, point.empirical, point.theoretical, point.sigma);
    out << buffer;
  }
}

}  // namespace triehh
