#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "triehh/alphabet.hpp"
#include "triehh/rng.hpp"

namespace triehh {

/// One held sequence with its on-device count.
struct WordEntry {
  std::string sequence;       // normalized: ends with EOS
  std::uint64_t count = 0;    // >= 1
  /// Pre-normalization tokens (no EOS) and their counts. Usually the single
  /// EOS-stripped sequence; holds several entries when ingest truncation
  /// merged distinct tokens. Dictionary filtering matches against these.
  std::map<std::string, std::uint64_t> originals;

  WordEntry() = default;
  WordEntry(std::string seq, std::uint64_t cnt);
  WordEntry(std::string seq, std::uint64_t cnt, std::map<std::string, std::uint64_t> orig);
};

/// One user's multiset of sequences with precomputed local frequencies.
class UserRecord {
 public:
  UserRecord(std::string id, std::vector<WordEntry> words);

  const std::string& id() const { return id_; }
  const std::vector<WordEntry>& words() const { return words_; }

  /// Local frequencies f = count / total, aligned with words(). Sums to 1.
  const std::vector<double>& frequencies() const { return freqs_; }

  std::uint64_t total_count() const { return total_; }

  /// Draws one sequence with probability equal to its local frequency.
  /// Implemented as an integer draw over counts, so probabilities are exact.
  /// A single-sequence user consumes no randomness.
  const std::string& draw_sequence(Rng& rng) const;

 private:
  std::string id_;
  std::vector<WordEntry> words_;        // sorted by sequence
  std::vector<double> freqs_;
  std::vector<std::uint64_t> cumulative_;  // inclusive prefix sums of counts
  std::uint64_t total_ = 0;
};

/// Immutable population of users; safe to share read-only across threads.
class UserDataset {
 public:
  explicit UserDataset(std::vector<UserRecord> users,
                       Alphabet alphabet = Alphabet::printable_ascii());

  std::size_t n() const { return users_.size(); }
  const UserRecord& user(std::size_t i) const { return users_[i]; }
  const std::vector<UserRecord>& users() const { return users_; }
  const Alphabet& alphabet() const { return alphabet_; }

  /// Length of the longest held sequence, EOS included.
  std::size_t max_sequence_length() const { return max_sequence_length_; }

  bool single_sequence_per_user() const;

  /// Population frequency F(w) = (1/n) * sum_i f_i(w).
  std::map<std::string, double> population_frequencies() const;

  /// One {"user": id, "words": {sequence: count}} object per line, users in
  /// dataset order, keys sorted. Sequences keep their EOS marker.
  void dump_jsonl(std::ostream& out) const;

  /// Reads the dump_jsonl format. Sequences must already be normalized.
  static UserDataset load_jsonl(std::istream& in,
                                Alphabet alphabet = Alphabet::printable_ascii());
  static UserDataset load_jsonl_file(const std::string& path,
                                     Alphabet alphabet = Alphabet::printable_ascii());

 private:
  std::vector<UserRecord> users_;
  Alphabet alphabet_;
  std::size_t max_sequence_length_ = 0;
};

}  // namespace triehh
