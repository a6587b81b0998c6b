#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "triehh/dataset.hpp"

namespace triehh {

/// One raw corpus row before tokenization.
struct CorpusRecord {
  std::string user;
  std::string text;
};

struct IngestConfig {
  /// Longest stored sequence incl. EOS; raw tokens truncate to max_length-1.
  std::size_t max_length = 10;
  bool lowercase = true;
  /// Strip leading/trailing punctuation from tokens. Off by default so
  /// tokens such as "*hugs*" and ":'(" survive intact.
  bool strip_punctuation = false;
  Alphabet alphabet = Alphabet::printable_ascii();
  /// Optional dictionary (one word per line); tokens found in it are dropped
  /// before truncation.
  std::string oov_dictionary_path;
  enum class WordSelection { kAll, kTop1 };
  /// kTop1 keeps only each user's highest-local-frequency word (ties broken
  /// lexicographically) with count 1.
  WordSelection selection = WordSelection::kAll;
};

/// Reads a CSV corpus and builds the dataset. Two layouts are auto-detected
/// by column count: 6 columns (polarity, id, date, query, user, text) or
/// 2 columns (user, text). Text is split on whitespace; tokens with symbols
/// outside the alphabet are dropped; survivors are truncated, EOS-terminated
/// and aggregated per user.
UserDataset ingest_csv(const std::string& path, const IngestConfig& config);

/// Same pipeline over in-memory records.
UserDataset ingest_records(const std::vector<CorpusRecord>& records, const IngestConfig& config);

/// Reads pre-tokenized JSONL lines {"user": id, "words": {token: count}}.
/// Tokens are raw (no EOS) and go through the same normalization as CSV
/// text. For already-normalized dumps use UserDataset::load_jsonl instead.
UserDataset ingest_jsonl(const std::string& path, const IngestConfig& config);

std::unordered_set<std::string> load_dictionary(const std::string& path);

/// Removes every word whose pre-truncation original form (EOS-stripped) is
/// in the dictionary, recomputes local frequencies and drops users left with
/// nothing. Requires a non-empty dictionary.
UserDataset filter_oov(const UserDataset& dataset, const std::unordered_set<std::string>& dictionary);

/// Raw tokens (no EOS) with population frequencies. Entries may sum to less
/// than 1; generate_synthetic assigns the remaining mass to unique filler
/// words.
struct FrequencyTable {
  std::vector<std::pair<std::string, double>> entries;
  double total() const;
};

/// n_users users, each holding words_per_user i.i.d. draws from the table.
/// Draws landing in the remainder mass become globally unique filler words
/// ("~" + base-36 id), so every filler occurs exactly once in the
/// population. max_length > 0 truncates words to max_length-1 symbols before
/// the EOS is appended. Deterministic for a fixed (table, n, words, seed).
UserDataset generate_synthetic(const FrequencyTable& table, std::size_t n_users,
                               std::size_t words_per_user, std::uint64_t seed,
                               std::size_t max_length = 0);

/// Zipf frequencies f_rank ∝ rank^-exponent over a synthetic vocabulary of
/// short base-36 tokens, normalized to sum to 1.
FrequencyTable zipf_table(std::size_t vocabulary, double exponent);

/// Bundled word-frequency fixtures: "sentiment140-top100" (top words of a
/// 1.6M-tweet corpus) and "oov-top100" (top out-of-vocabulary words of the
/// same corpus).
const FrequencyTable& fixture_table(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace triehh
