#include "triehh/trie.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace triehh {

std::uint64_t VoteTally::total() const {
  std::uint64_t sum = 0;
  for (const auto& [prefix, count] : votes) sum += count;
  return sum;
}

nlohmann::json VoteTally::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [prefix, count] : votes) j[prefix] = count;
  return j;
}

VoteTally VoteTally::from_json(const nlohmann::json& j) {
  VoteTally tally;
  for (const auto& [prefix, count] : j.items()) {
    tally.votes[prefix] = count.get<std::uint64_t>();
  }
  return tally;
}

bool Trie::contains_prefix(std::string_view prefix) const {
  const Node* node = &root_;
  for (char c : prefix) {
    auto it = node->children.find(c);
    if (it == node->children.end()) return false;
    node = &it->second;
  }
  return true;
}

void Trie::insert_prefix(std::string_view prefix) {
  Node* node = &root_;
  for (char c : prefix) {
    auto [it, inserted] = node->children.try_emplace(c);
    if (inserted) ++node_count_;
    node = &it->second;
  }
  levels_ = std::max(levels_, prefix.size());
}

namespace {

template <typename Node, typename Visit>
void visit_paths(const Node& node, std::string& path, Visit&& visit) {
  for (const auto& [symbol, child] : node.children) {
    path.push_back(symbol);
    visit(path, child);
    visit_paths(child, path, visit);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::string> Trie::words() const {
  std::vector<std::string> out;
  std::string path;
  visit_paths(root_, path, [&](const std::string& p, const Node& node) {
    if (p.back() == kEos && node.children.empty()) out.push_back(p);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Trie::prefixes() const {
  std::vector<std::string> out;
  out.reserve(node_count_);
  std::string path;
  visit_paths(root_, path, [&](const std::string& p, const Node&) { out.push_back(p); });
  std::sort(out.begin(), out.end());
  return out;
}

bool Trie::is_subtrie_of(const Trie& other) const {
  std::function<bool(const Node&, const Node&)> covered = [&](const Node& a, const Node& b) {
    for (const auto& [symbol, child] : a.children) {
      auto it = b.children.find(symbol);
      if (it == b.children.end() || !covered(child, it->second)) return false;
    }
    return true;
  };
  return covered(root_, other.root_);
}

nlohmann::json Trie::to_json() const {
  std::function<nlohmann::json(const Node&, char)> encode = [&](const Node& node, char symbol) {
    nlohmann::json j;
    j["symbol"] = symbol ? std::string(1, symbol) : std::string();
    nlohmann::json children = nlohmann::json::array();
    for (const auto& [c, child] : node.children) children.push_back(encode(child, c));
    j["children"] = std::move(children);
    return j;
  };
  return nlohmann::json{{"node", encode(root_, '\0')}};
}

Trie Trie::from_json(const nlohmann::json& j) {
  Trie trie;
  std::function<void(const nlohmann::json&, std::string&)> decode = [&](const nlohmann::json& node,
                                                                        std::string& path) {
    for (const auto& child : node.at("children")) {
      const std::string symbol = child.at("symbol").get<std::string>();
      if (symbol.size() != 1) throw std::invalid_argument("trie node symbol must be one character");
      path.push_back(symbol[0]);
      trie.insert_prefix(path);
      decode(child, path);
      path.pop_back();
    }
  };
  std::string path;
  decode(j.at("node"), path);
  return trie;
}

GrowResult grow_one_level_with_tally(const std::vector<std::string>& sampled_sequences,
                                     const Trie& trie, std::uint64_t theta, std::size_t level,
                                     const Alphabet& alphabet) {
  if (level < 1) throw std::invalid_argument("level must be at least 1");
  if (theta < 1) throw std::invalid_argument("threshold must be at least 1");
  if (trie.levels() > level - 1) {
    throw std::invalid_argument("input trie already has nodes at the requested level");
  }

  GrowResult result;
  for (const std::string& sequence : sampled_sequences) {
    alphabet.validate_sequence(sequence);
    if (sequence.size() < level) continue;
    // Voting gate: the sequence's (level-1)-prefix must already be known.
    if (!trie.contains_prefix(std::string_view(sequence).substr(0, level - 1))) continue;
    ++result.tally.votes[sequence.substr(0, level)];
  }

  result.trie = trie;
  for (const auto& [prefix, count] : result.tally.votes) {
    if (count >= theta) {
      result.trie.insert_prefix(prefix);
      result.added.push_back(prefix);
    }
  }
  return result;
}

Trie grow_one_level(const std::vector<std::string>& sampled_sequences, const Trie& trie,
                    std::uint64_t theta, std::size_t level, const Alphabet& alphabet) {
  return grow_one_level_with_tally(sampled_sequences, trie, theta, level, alphabet).trie;
}

std::vector<std::string> extract_words(const Trie& trie) { return trie.words(); }

std::vector<std::string> extract_prefixes(const Trie& trie) { return trie.prefixes(); }

}  // namespace triehh
