#include "triehh/protocol.hpp"

#include <numeric>
#include <stdexcept>

namespace triehh {

nlohmann::json ProtocolParams::to_json() const {
  return nlohmann::json{
      {"theta", theta}, {"batch_size", batch_size}, {"max_length", max_length}};
}

ProtocolParams ProtocolParams::from_json(const nlohmann::json& j) {
  return ProtocolParams{j.at("theta").get<std::uint64_t>(),
                        j.at("batch_size").get<std::uint64_t>(),
                        j.at("max_length").get<std::size_t>()};
}

nlohmann::json RoundLog::to_json() const {
  return nlohmann::json{{"round", round},
                        {"sampled_users", sampled_users},
                        {"tally", tally.to_json()},
                        {"added", added}};
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"seed", seed},
                   {"rounds_executed", rounds_executed},
                   {"params", nlohmann::json{{"protocol", protocol.to_json()},
                                             {"privacy", privacy ? privacy->to_json()
                                                                 : nlohmann::json(nullptr)}}},
                   {"discovered", discovered},
                   {"trie", final_trie.to_json()}};
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const RoundLog& log : rounds) rounds_json.push_back(log.to_json());
  j["rounds"] = std::move(rounds_json);
  return j;
}

std::vector<std::uint32_t> sample_users(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("batch size must be at least 1");
  if (m > n) {
    throw std::invalid_argument("batch size " + std::to_string(m) + " exceeds population " +
                                std::to_string(n));
  }
  std::vector<std::uint32_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0U);
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(m);
  return indices;
}

namespace {

RunReport run_protocol(const UserDataset& dataset, const ProtocolParams& params,
                       std::uint64_t seed, const RunOptions& options, bool multi_word,
                       std::optional<PrivacyParams> privacy) {
  if (params.theta < 1) throw std::invalid_argument("threshold must be at least 1");
  if (params.batch_size < 1 || params.batch_size > dataset.n()) {
    throw std::invalid_argument("batch size must satisfy 1 <= m <= n (m=" +
                                std::to_string(params.batch_size) +
                                ", n=" + std::to_string(dataset.n()) + ")");
  }
  if (dataset.max_sequence_length() > params.max_length) {
    throw std::invalid_argument(
        "dataset holds a sequence longer than the configured max length");
  }
  if (!multi_word && !dataset.single_sequence_per_user()) {
    throw std::invalid_argument("single-word protocol requires one sequence per user");
  }

  RunReport report;
  report.protocol = params;
  report.privacy = privacy;
  report.seed = seed;

  Trie trie;
  const std::uint32_t round_cap = static_cast<std::uint32_t>(params.max_length) + 1;
  std::vector<std::string> sampled_sequences;
  sampled_sequences.reserve(params.batch_size);

  for (std::uint32_t round = 1; round <= round_cap; ++round) {
    Rng rng = Rng::for_stream(seed, round);
    std::vector<std::uint32_t> sampled = sample_users(dataset.n(), params.batch_size, rng);
    sampled_sequences.clear();
    for (std::uint32_t user_index : sampled) {
      const UserRecord& user = dataset.user(user_index);
      sampled_sequences.push_back(multi_word ? user.draw_sequence(rng)
                                             : user.words().front().sequence);
    }
    GrowResult grown = grow_one_level_with_tally(sampled_sequences, trie, params.theta, round,
                                                 dataset.alphabet());
    const bool changed = !grown.added.empty();
    trie = std::move(grown.trie);
    report.rounds_executed = round;
    if (options.keep_round_logs) {
      report.rounds.push_back(
          RoundLog{round, std::move(sampled), std::move(grown.tally), std::move(grown.added)});
    }
    if (!changed) break;  // fixed point: this round's trie equals the previous one
  }

  report.final_trie = std::move(trie);
  report.discovered = report.final_trie.words();
  return report;
}

}  // namespace

RunReport run_single_word(const UserDataset& dataset, const ProtocolParams& params,
                          std::uint64_t seed, const RunOptions& options) {
  return run_protocol(dataset, params, seed, options, /*multi_word=*/false, std::nullopt);
}

RunReport run_single_word(const UserDataset& dataset, const PrivacyParams& params,
                          std::uint64_t seed, const RunOptions& options) {
  if (params.n != dataset.n()) {
    throw std::invalid_argument("privacy parameters were derived for a different population size");
  }
  return run_protocol(dataset, params.protocol(), seed, options, /*multi_word=*/false, params);
}

RunReport run_multi_word(const UserDataset& dataset, const ProtocolParams& params,
                         std::uint64_t seed, const RunOptions& options) {
  return run_protocol(dataset, params, seed, options, /*multi_word=*/true, std::nullopt);
}

RunReport run_multi_word(const UserDataset& dataset, const PrivacyParams& params,
                         std::uint64_t seed, const RunOptions& options) {
  if (params.n != dataset.n()) {
    throw std::invalid_argument("privacy parameters were derived for a different population size");
  }
  return run_protocol(dataset, params.protocol(), seed, options, /*multi_word=*/true, params);
}

}  // namespace triehh
