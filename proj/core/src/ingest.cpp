#include "triehh/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace triehh {

namespace {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerant.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next_row(std::vector<std::string>& row) {
    row.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
      any = true;
      const char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"') {
        in_quotes = true;
      } else if (ch == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        break;
      } else if (ch != '\r') {
        field.push_back(ch);
      }
    }
    if (!any) return false;
    row.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
};

std::string strip_surrounding_punctuation(const std::string& token) {
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_punct(token[begin])) ++begin;
  while (end > begin && is_punct(token[end - 1])) --end;
  return token.substr(begin, end - begin);
}

// Aggregated per-user counts keyed by normalized sequence; each sequence
// remembers the raw tokens that produced it.
using WordCounts = std::map<std::string, std::map<std::string, std::uint64_t>>;

void add_token(WordCounts& counts, const std::string& raw_token, const IngestConfig& config,
               const std::unordered_set<std::string>* dictionary, std::uint64_t count = 1) {
  std::string token = raw_token;
  if (config.strip_punctuation) token = strip_surrounding_punctuation(token);
  if (config.lowercase) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
  if (token.empty() || count == 0) return;
  for (char c : token) {
    if (!config.alphabet.contains(c) || c == kEos) return;  // drop disallowed tokens
  }
  if (dictionary && dictionary->count(token)) return;  // in-dictionary word
  std::string sequence = token.substr(0, config.max_length - 1);
  sequence.push_back(kEos);
  counts[sequence][token] += count;
}

UserDataset build_dataset(std::map<std::string, WordCounts>&& per_user,
                          const IngestConfig& config) {
  std::vector<UserRecord> users;
  users.reserve(per_user.size());
  for (auto& [user_id, word_counts] : per_user) {
    if (word_counts.empty()) continue;
    std::vector<WordEntry> words;
    words.reserve(word_counts.size());
    for (auto& [sequence, originals] : word_counts) {
      std::uint64_t count = 0;
      for (const auto& [token, c] : originals) count += c;
      words.emplace_back(sequence, count, std::move(originals));
    }
    if (config.selection == IngestConfig::WordSelection::kTop1) {
      // Highest local frequency, ties to the lexicographically smaller word.
      const WordEntry* best = &words.front();
      for (const WordEntry& entry : words) {
        if (entry.count > best->count) best = &entry;
      }
      words = {WordEntry(best->sequence, 1, best->originals)};
    }
    users.emplace_back(user_id, std::move(words));
  }
  if (users.empty()) throw std::runtime_error("no users left after ingest filtering");
  return UserDataset(std::move(users), config.alphabet);
}

void check_config(const IngestConfig& config) {
  if (config.max_length < 2) {
    throw std::invalid_argument("max length must be at least 2 (one symbol plus EOS)");
  }
}

}  // namespace

UserDataset ingest_records(const std::vector<CorpusRecord>& records, const IngestConfig& config) {
  check_config(config);
  std::unordered_set<std::string> dictionary;
  const bool use_dictionary = !config.oov_dictionary_path.empty();
  if (use_dictionary) dictionary = load_dictionary(config.oov_dictionary_path);

  std::map<std::string, WordCounts> per_user;
  for (const CorpusRecord& record : records) {
    if (record.user.empty()) throw std::invalid_argument("corpus record with empty user id");
    WordCounts& counts = per_user[record.user];
    std::istringstream tokens(record.text);
    std::string token;
    while (tokens >> token) {
      add_token(counts, token, config, use_dictionary ? &dictionary : nullptr);
    }
  }
  // Users whose every token was filtered contribute nothing.
  std::erase_if(per_user, [](const auto& kv) { return kv.second.empty(); });
  return build_dataset(std::move(per_user), config);
}

UserDataset ingest_csv(const std::string& path, const IngestConfig& config) {
  check_config(config);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  std::vector<CorpusRecord> records;
  CsvReader reader(in);
  std::vector<std::string> row;
  std::size_t columns = 0;
  std::size_t row_no = 0;
  while (reader.next_row(row)) {
    ++row_no;
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (columns == 0) {
      if (row.size() != 6 && row.size() != 2) {
        throw std::runtime_error(path + ": expected 6-column or 2-column layout, found " +
                                 std::to_string(row.size()) + " columns");
      }
      columns = row.size();
    } else if (row.size() != columns) {
      throw std::runtime_error(path + " row " + std::to_string(row_no) + ": expected " +
                               std::to_string(columns) + " columns, found " +
                               std::to_string(row.size()));
    }
    // 6 columns: polarity, id, date, query, user, text. 2 columns: user, text.
    if (columns == 6) {
      records.push_back(CorpusRecord{row[4], row[5]});
    } else {
      records.push_back(CorpusRecord{row[0], row[1]});
    }
  }
  return ingest_records(records, config);
}

UserDataset ingest_jsonl(const std::string& path, const IngestConfig& config) {
  check_config(config);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::unordered_set<std::string> dictionary;
  const bool use_dictionary = !config.oov_dictionary_path.empty();
  if (use_dictionary) dictionary = load_dictionary(config.oov_dictionary_path);

  std::map<std::string, WordCounts> per_user;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string user = j.at("user").get<std::string>();
    if (user.empty()) throw std::invalid_argument("corpus record with empty user id");
    WordCounts& counts = per_user[user];
    for (const auto& [token, count] : j.at("words").items()) {
      add_token(counts, token, config, use_dictionary ? &dictionary : nullptr,
                count.get<std::uint64_t>());
    }
  }
  std::erase_if(per_user, [](const auto& kv) { return kv.second.empty(); });
  return build_dataset(std::move(per_user), config);
}

std::unordered_set<std::string> load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dictionary file: " + path);
  std::unordered_set<std::string> dictionary;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) dictionary.insert(line);
  }
  return dictionary;
}

UserDataset filter_oov(const UserDataset& dataset,
                       const std::unordered_set<std::string>& dictionary) {
  if (dictionary.empty()) throw std::invalid_argument("dictionary must be non-empty");
  std::vector<UserRecord> users;
  for (const UserRecord& user : dataset.users()) {
    std::vector<WordEntry> kept;
    for (const WordEntry& entry : user.words()) {
      std::map<std::string, std::uint64_t> originals;
      std::uint64_t count = 0;
      for (const auto& [token, c] : entry.originals) {
        if (dictionary.count(token)) continue;
        originals[token] = c;
        count += c;
      }
      if (count > 0) kept.emplace_back(entry.sequence, count, std::move(originals));
    }
    if (!kept.empty()) users.emplace_back(user.id(), std::move(kept));
  }
  if (users.empty()) throw std::runtime_error("no users left after dictionary filtering");
  return UserDataset(std::move(users), dataset.alphabet());
}

double FrequencyTable::total() const {
  double sum = 0.0;
  for (const auto& [word, freq] : entries) sum += freq;
  return sum;
}

namespace {

std::string base36(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  do {
    out.push_back(kDigits[value % 36]);
    value /= 36;
  } while (value != 0);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

UserDataset generate_synthetic(const FrequencyTable& table, std::size_t n_users,
                               std::size_t words_per_user, std::uint64_t seed,
                               std::size_t max_length) {
  if (n_users == 0) throw std::invalid_argument("need at least one user");
  if (words_per_user == 0) throw std::invalid_argument("need at least one word per user");
  if (max_length == 1) throw std::invalid_argument("max length must be at least 2 or 0 (off)");

  std::vector<double> cumulative;
  cumulative.reserve(table.entries.size());
  double sum = 0.0;
  for (const auto& [word, freq] : table.entries) {
    if (!(freq > 0.0)) throw std::invalid_argument("table frequency for \"" + word +
                                                   "\" must be positive");
    sum += freq;
    cumulative.push_back(sum);
  }
  if (sum > 1.0 + 1e-9) throw std::invalid_argument("table frequencies must sum to at most 1");

  auto normalize = [&](std::string token) {
    if (max_length > 0 && token.size() > max_length - 1) token.resize(max_length - 1);
    return token;
  };

  Rng rng = Rng::for_stream(seed, 0);
  std::uint64_t filler_id = 0;
  std::vector<UserRecord> users;
  users.reserve(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    // sequence -> (original token -> count)
    std::map<std::string, std::map<std::string, std::uint64_t>> counts;
    for (std::size_t k = 0; k < words_per_user; ++k) {
      const double r = rng.unit();
      std::string token;
      if (r < sum) {
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        token = table.entries[static_cast<std::size_t>(it - cumulative.begin())].first;
      } else {
        token = "~" + base36(filler_id++);  // remainder mass: unique filler
      }
      token = normalize(std::move(token));
      std::string sequence = token + kEos;
      counts[sequence][token] += 1;
    }
    std::vector<WordEntry> words;
    words.reserve(counts.size());
    for (auto& [sequence, originals] : counts) {
      std::uint64_t count = 0;
      for (const auto& [token, c] : originals) count += c;
      words.emplace_back(sequence, count, std::move(originals));
    }
    users.emplace_back("u" + std::to_string(u), std::move(words));
  }
  return UserDataset(std::move(users));
}

FrequencyTable zipf_table(std::size_t vocabulary, double exponent) {
  if (vocabulary == 0) throw std::invalid_argument("vocabulary must be non-empty");
  FrequencyTable table;
  table.entries.reserve(vocabulary);
  double norm = 0.0;
  for (std::size_t rank = 1; rank <= vocabulary; ++rank) {
    norm += std::pow(static_cast<double>(rank), -exponent);
  }
  for (std::size_t rank = 1; rank <= vocabulary; ++rank) {
    table.entries.emplace_back("z" + base36(rank - 1),
                               std::pow(static_cast<double>(rank), -exponent) / norm);
  }
  return table;
}

}  // namespace triehh
