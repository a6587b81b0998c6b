#include "triehh/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace triehh {

WordEntry::WordEntry(std::string seq, std::uint64_t cnt) : sequence(std::move(seq)), count(cnt) {
  std::string stripped = sequence;
  if (!stripped.empty() && stripped.back() == kEos) stripped.pop_back();
  originals[stripped] = count;
}

WordEntry::WordEntry(std::string seq, std::uint64_t cnt, std::map<std::string, std::uint64_t> orig)
    : sequence(std::move(seq)), count(cnt), originals(std::move(orig)) {}

UserRecord::UserRecord(std::string id, std::vector<WordEntry> words)
    : id_(std::move(id)), words_(std::move(words)) {
  if (id_.empty()) throw std::invalid_argument("user identifier must be non-empty");
  if (words_.empty()) throw std::invalid_argument("user \"" + id_ + "\" holds no sequences");
  std::sort(words_.begin(), words_.end(),
            [](const WordEntry& a, const WordEntry& b) { return a.sequence < b.sequence; });
  for (std::size_t i = 0; i + 1 < words_.size(); ++i) {
    if (words_[i].sequence == words_[i + 1].sequence) {
      throw std::invalid_argument("user \"" + id_ + "\" lists sequence \"" + words_[i].sequence +
                                  "\" twice");
    }
  }
  cumulative_.reserve(words_.size());
  for (const WordEntry& entry : words_) {
    if (entry.count == 0) {
      throw std::invalid_argument("sequence \"" + entry.sequence + "\" of user \"" + id_ +
                                  "\" has count 0");
    }
    total_ += entry.count;
    cumulative_.push_back(total_);
  }
  freqs_.reserve(words_.size());
  for (const WordEntry& entry : words_) {
    freqs_.push_back(static_cast<double>(entry.count) / static_cast<double>(total_));
  }
}

const std::string& UserRecord::draw_sequence(Rng& rng) const {
  if (words_.size() == 1) return words_.front().sequence;
  std::uint64_t r = rng.below(total_);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return words_[static_cast<std::size_t>(it - cumulative_.begin())].sequence;
}

UserDataset::UserDataset(std::vector<UserRecord> users, Alphabet alphabet)
    : users_(std::move(users)), alphabet_(alphabet) {
  if (users_.empty()) throw std::invalid_argument("dataset must contain at least one user");
  for (const UserRecord& user : users_) {
    for (const WordEntry& entry : user.words()) {
      alphabet_.validate_sequence(entry.sequence);
      if (entry.sequence.empty() || entry.sequence.back() != kEos) {
        throw std::invalid_argument("sequence \"" + entry.sequence + "\" of user \"" + user.id() +
                                    "\" does not end with the EOS marker");
      }
      max_sequence_length_ = std::max(max_sequence_length_, entry.sequence.size());
    }
  }
}

bool UserDataset::single_sequence_per_user() const {
  return std::all_of(users_.begin(), users_.end(),
                     [](const UserRecord& u) { return u.words().size() == 1; });
}

std::map<std::string, double> UserDataset::population_frequencies() const {
  std::map<std::string, double> freq;
  const double inv_n = 1.0 / static_cast<double>(users_.size());
  for (const UserRecord& user : users_) {
    for (std::size_t i = 0; i < user.words().size(); ++i) {
      freq[user.words()[i].sequence] += user.frequencies()[i] * inv_n;
    }
  }
  return freq;
}

void UserDataset::dump_jsonl(std::ostream& out) const {
  for (const UserRecord& user : users_) {
    nlohmann::json words = nlohmann::json::object();
    for (const WordEntry& entry : user.words()) words[entry.sequence] = entry.count;
    nlohmann::json line{{"user", user.id()}, {"words", std::move(words)}};
    out << line.dump() << '\n';
  }
}

UserDataset UserDataset::load_jsonl(std::istream& in, Alphabet alphabet) {
  std::vector<UserRecord> users;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    std::vector<WordEntry> words;
    for (const auto& [sequence, count] : j.at("words").items()) {
      words.emplace_back(sequence, count.get<std::uint64_t>());
    }
    users.emplace_back(j.at("user").get<std::string>(), std::move(words));
  }
  return UserDataset(std::move(users), alphabet);
}

UserDataset UserDataset::load_jsonl_file(const std::string& path, Alphabet alphabet) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return load_jsonl(in, alphabet);
}

}  // namespace triehh
