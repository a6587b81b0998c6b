#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "triehh/dataset.hpp"
#include "triehh/privacy.hpp"
#include "triehh/rng.hpp"
#include "triehh/trie.hpp"

namespace triehh {

/// The slice of the parameterization a run actually consumes. Simulations
/// that explore settings outside the proven privacy ranges (demos, tests)
/// can construct this directly; PrivacyParams::protocol() narrows to it.
struct ProtocolParams {
  std::uint64_t theta = 0;       // votes required to keep a prefix
  std::uint64_t batch_size = 0;  // users sampled per round (m)
  std::size_t max_length = 0;    // longest admissible sequence incl. EOS (L)

  nlohmann::json to_json() const;
  static ProtocolParams from_json(const nlohmann::json& j);
  bool operator==(const ProtocolParams&) const = default;
};

struct RoundLog {
  std::uint32_t round = 0;                    // 1-based; round i grows level i
  std::vector<std::uint32_t> sampled_users;   // dataset indices, sampling order
  VoteTally tally;
  std::vector<std::string> added;

  nlohmann::json to_json() const;
};

struct RunOptions {
  /// Per-round logs can dominate report size in large batteries.
  bool keep_round_logs = true;
};

/// Everything one protocol execution produced. Serialization is byte-stable:
/// identical (dataset, params, seed) gives identical JSON.
struct RunReport {
  static constexpr int kSchemaVersion = 1;

  Trie final_trie;
  std::vector<std::string> discovered;      // extract_words(final_trie)
  std::vector<RoundLog> rounds;             // empty when logs are suppressed
  ProtocolParams protocol;
  std::optional<PrivacyParams> privacy;     // set when derived from a calculator
  std::uint64_t seed = 0;
  std::uint32_t rounds_executed = 0;        // includes the final no-growth round

  nlohmann::json to_json() const;
};

/// m distinct user indices drawn uniformly (every m-subset equiprobable) via
/// a partial Fisher-Yates shuffle; order is the sampling order. Requires
/// 1 <= m <= n.
std::vector<std::uint32_t> sample_users(std::size_t n, std::size_t m, Rng& rng);

/// The single-sequence protocol: each round samples `batch_size` users
/// without replacement (fresh, independent draw each round), grows the trie
/// by one level at the round's threshold, and stops once a round adds
/// nothing. A cap of max_length+1 rounds bounds hostile inputs. Requires one
/// distinct sequence per user.
RunReport run_single_word(const UserDataset& dataset, const ProtocolParams& params,
                          std::uint64_t seed, const RunOptions& options = {});
RunReport run_single_word(const UserDataset& dataset, const PrivacyParams& params,
                          std::uint64_t seed, const RunOptions& options = {});

/// The multi-sequence protocol: as run_single_word, but each sampled user
/// first draws one of their sequences by local frequency (one draw per user
/// per round) and that sequence votes.
RunReport run_multi_word(const UserDataset& dataset, const ProtocolParams& params,
                         std::uint64_t seed, const RunOptions& options = {});
RunReport run_multi_word(const UserDataset& dataset, const PrivacyParams& params,
                         std::uint64_t seed, const RunOptions& options = {});

}  // namespace triehh
