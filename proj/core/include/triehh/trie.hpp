#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "triehh/alphabet.hpp"

namespace triehh {

/// Vote counts of one round, keyed by candidate prefix of the round's level.
struct VoteTally {
  std::map<std::string, std::uint64_t> votes;

  std::uint64_t total() const;
  nlohmann::json to_json() const;
  static VoteTally from_json(const nlohmann::json& j);

  bool operator==(const VoteTally&) const = default;
};

/// Server-side prefix tree of discovered popular prefixes.
///
/// Children are keyed (and therefore enumerated) by symbol, so every walk is
/// deterministic. Treat instances as immutable once built: growing happens by
/// copying, which keeps rounds free of aliasing and makes read-only sharing
/// across threads safe.
class Trie {
 public:
  Trie() = default;

  /// Number of populated levels (root is level 0 and does not count).
  std::size_t levels() const { return levels_; }

  /// Number of non-root nodes.
  std::size_t node_count() const { return node_count_; }

  /// True for the empty prefix (the root) and every stored path.
  bool contains_prefix(std::string_view prefix) const;

  /// Adds one node per missing symbol along `prefix`.
  void insert_prefix(std::string_view prefix);

  /// Root-to-leaf paths ending in EOS, in lexicographic order.
  std::vector<std::string> words() const;

  /// Every root-to-node path, in lexicographic order.
  std::vector<std::string> prefixes() const;

  /// True iff every path of *this is a path of `other`.
  bool is_subtrie_of(const Trie& other) const;

  bool operator==(const Trie& other) const { return root_ == other.root_; }

  /// {"node": {"symbol": "", "children": [...]}} with children sorted by
  /// symbol; the wire format used in run reports and golden files.
  nlohmann::json to_json() const;
  static Trie from_json(const nlohmann::json& j);

 private:
  struct Node {
    std::map<char, Node> children;
    bool operator==(const Node&) const = default;
  };

  Node root_;
  std::size_t levels_ = 0;
  std::size_t node_count_ = 0;
};

/// Output of one voting round.
struct GrowResult {
  Trie trie;
  VoteTally tally;
  std::vector<std::string> added;  // prefixes that reached the threshold, sorted
};

/// One voting round: every sequence w with |w| >= level whose (level-1)-prefix
/// is in `trie` casts a vote for its level-prefix; prefixes with at least
/// `theta` votes are added at `level`. The input trie is copied, never
/// mutated, and only `level` changes.
///
/// Duplicate sequences vote separately (they belong to distinct sampled
/// users). Throws std::invalid_argument for sequences outside `alphabet` or
/// with a non-terminal EOS, and for a trie already populated at `level`.
GrowResult grow_one_level_with_tally(const std::vector<std::string>& sampled_sequences,
                                     const Trie& trie, std::uint64_t theta, std::size_t level,
                                     const Alphabet& alphabet = Alphabet::printable_ascii());

/// As grow_one_level_with_tally, returning just the grown trie.
Trie grow_one_level(const std::vector<std::string>& sampled_sequences, const Trie& trie,
                    std::uint64_t theta, std::size_t level,
                    const Alphabet& alphabet = Alphabet::printable_ascii());

/// Complete words stored in the trie (EOS leaves), lexicographic.
std::vector<std::string> extract_words(const Trie& trie);

/// All discovered prefixes (every non-root node's path), lexicographic.
std::vector<std::string> extract_prefixes(const Trie& trie);

}  // namespace triehh
