#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "triehh/ingest.hpp"

using triehh::CorpusRecord;
using triehh::FrequencyTable;
using triehh::IngestConfig;
using triehh::UserDataset;
using triehh::filter_oov;
using triehh::fixture_table;
using triehh::generate_synthetic;
using triehh::ingest_csv;
using triehh::ingest_jsonl;
using triehh::ingest_records;
using triehh::zipf_table;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "triehh_ingest_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
};

double user_frequency(const UserDataset& dataset, const std::string& user,
                      const std::string& sequence) {
  for (const auto& record : dataset.users()) {
    if (record.id() != user) continue;
    for (std::size_t i = 0; i < record.words().size(); ++i) {
      if (record.words()[i].sequence == sequence) return record.frequencies()[i];
    }
  }
  return -1.0;
}

void check_invariants(const UserDataset& dataset, std::size_t max_length) {
  for (const auto& user : dataset.users()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < user.words().size(); ++i) {
      const auto& entry = user.words()[i];
      CHECK(entry.count >= 1);
      CHECK(entry.sequence.back() == '$');
      CHECK(entry.sequence.find('$') == entry.sequence.size() - 1);
      CHECK(entry.sequence.size() <= max_length);
      sum += user.frequencies()[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("tokens aggregate into per-user counts and frequencies") {
  UserDataset dataset = ingest_records(
      {{"alice", "sun sun"}, {"alice", "moon"}}, IngestConfig{});
  REQUIRE(dataset.n() == 1);
  const auto& alice = dataset.user(0);
  REQUIRE(alice.words().size() == 2);
  CHECK(alice.words()[0].sequence == "moon$");
  CHECK(alice.words()[0].count == 1);
  CHECK(alice.words()[1].sequence == "sun$");
  CHECK(alice.words()[1].count == 2);
  CHECK(user_frequency(dataset, "alice", "sun$") == doctest::Approx(2.0 / 3.0));
  CHECK(user_frequency(dataset, "alice", "moon$") == doctest::Approx(1.0 / 3.0));
  check_invariants(dataset, 10);
}

TEST_CASE("top1 keeps only the most frequent word with count 1") {
  IngestConfig config;
  config.selection = IngestConfig::WordSelection::kTop1;
  UserDataset dataset = ingest_records({{"alice", "sun sun"}, {"alice", "moon"}}, config);
  REQUIRE(dataset.user(0).words().size() == 1);
  CHECK(dataset.user(0).words()[0].sequence == "sun$");
  CHECK(dataset.user(0).words()[0].count == 1);

  // tie: lexicographically smaller word wins
  UserDataset tie = ingest_records({{"bob", "moon sun"}}, config);
  CHECK(tie.user(0).words()[0].sequence == "moon$");
}

TEST_CASE("long tokens truncate to max_length-1 symbols plus EOS") {
  UserDataset dataset =
      ingest_records({{"u", "abcdefghijklmnopqrstuvwxy"}}, IngestConfig{});  // 25 symbols
  CHECK(dataset.user(0).words()[0].sequence == "abcdefghi$");
  CHECK(dataset.user(0).words()[0].originals.count("abcdefghijklmnopqrstuvwxy") == 1);
  check_invariants(dataset, 10);
}

TEST_CASE("case folding and symbol filtering") {
  UserDataset dataset = ingest_records({{"u", "Sun SUN caf\xc3\xa9 b/c"}}, IngestConfig{});
  REQUIRE(dataset.user(0).words().size() == 2);  // café dropped (non-ASCII byte)
  CHECK(dataset.user(0).words()[0].sequence == "b/c$");
  CHECK(dataset.user(0).words()[1].sequence == "sun$");
  CHECK(dataset.user(0).words()[1].count == 2);

  IngestConfig keep_case;
  keep_case.lowercase = false;
  UserDataset cased = ingest_records({{"u", "Sun sun"}}, keep_case);
  CHECK(cased.user(0).words().size() == 2);
}

TEST_CASE("punctuation stripping is opt-in so OOV tokens survive") {
  UserDataset raw = ingest_records({{"u", "*hugs* :'("}}, IngestConfig{});
  REQUIRE(raw.user(0).words().size() == 2);
  CHECK(raw.user(0).words()[0].sequence == "*hugs*$");

  IngestConfig strip;
  strip.strip_punctuation = true;
  UserDataset stripped = ingest_records({{"u", "*hugs* (nice)"}}, strip);
  REQUIRE(stripped.user(0).words().size() == 2);
  CHECK(stripped.user(0).words()[0].sequence == "hugs$");
  CHECK(stripped.user(0).words()[1].sequence == "nice$");
}

TEST_CASE("six-column and two-column CSV layouts are auto-detected") {
  TempDir tmp;
  const auto six = tmp.file("six.csv",
                            "0,123,Mon May 11,NO_QUERY,alice,\"sun, sun moon\"\n"
                            "4,124,Mon May 11,NO_QUERY,bob,star\n");
  UserDataset dataset = ingest_csv(six.string(), IngestConfig{});
  REQUIRE(dataset.n() == 2);
  CHECK(user_frequency(dataset, "alice", "sun,$") >= 0.0);  // comma survives inside quotes
  CHECK(user_frequency(dataset, "bob", "star$") == doctest::Approx(1.0));

  const auto two = tmp.file("two.csv", "alice,sun sun\nbob,\"moon, moon\"\n");
  UserDataset dataset2 = ingest_csv(two.string(), IngestConfig{});
  REQUIRE(dataset2.n() == 2);
  CHECK(user_frequency(dataset2, "alice", "sun$") == doctest::Approx(1.0));

  const auto bad = tmp.file("bad.csv", "a,b,c\n");
  CHECK_THROWS_AS((void)ingest_csv(bad.string(), IngestConfig{}), std::runtime_error);
  CHECK_THROWS_AS((void)ingest_csv((tmp.path / "missing.csv").string(), IngestConfig{}),
                  std::runtime_error);
}

TEST_CASE("pre-tokenized JSONL ingests raw tokens") {
  TempDir tmp;
  const auto path = tmp.file("corpus.jsonl",
                             R"({"user":"alice","words":{"sun":2,"moon":1}})"
                             "\n"
                             R"({"user":"bob","words":{"abcdefghijklmnop":1}})"
                             "\n");
  UserDataset dataset = ingest_jsonl(path.string(), IngestConfig{});
  REQUIRE(dataset.n() == 2);
  CHECK(user_frequency(dataset, "alice", "sun$") == doctest::Approx(2.0 / 3.0));
  CHECK(user_frequency(dataset, "bob", "abcdefghi$") == doctest::Approx(1.0));
}

TEST_CASE("dictionary filtering removes words by their original form") {
  UserDataset dataset = ingest_records({{"u", "sun sun b/c"}}, IngestConfig{});
  UserDataset filtered = filter_oov(dataset, {"sun"});
  REQUIRE(filtered.n() == 1);
  REQUIRE(filtered.user(0).words().size() == 1);
  CHECK(filtered.user(0).words()[0].sequence == "b/c$");
  CHECK(filtered.user(0).frequencies()[0] == doctest::Approx(1.0));

  // no intersection: unchanged
  UserDataset untouched = filter_oov(dataset, {"absent"});
  std::ostringstream a, b;
  dataset.dump_jsonl(a);
  untouched.dump_jsonl(b);
  CHECK(a.str() == b.str());

  // all words in the dictionary: the user disappears and n shrinks
  UserDataset two = ingest_records({{"u1", "sun"}, {"u2", "moon"}}, IngestConfig{});
  UserDataset shrunk = filter_oov(two, {"sun"});
  CHECK(shrunk.n() == 1);
  CHECK_THROWS_AS((void)filter_oov(two, {"sun", "moon"}), std::runtime_error);
  CHECK_THROWS_AS((void)filter_oov(two, {}), std::invalid_argument);
}

TEST_CASE("dictionary matching sees the untruncated original, not the stored form") {
  // "information" truncates to "informati$"; the stored form is not in the
  // dictionary but the original is, so the word must go.
  UserDataset dataset = ingest_records({{"u", "information data"}}, IngestConfig{});
  CHECK(user_frequency(dataset, "u", "informati$") == doctest::Approx(0.5));
  UserDataset filtered = filter_oov(dataset, {"information"});
  REQUIRE(filtered.user(0).words().size() == 1);
  CHECK(filtered.user(0).words()[0].sequence == "data$");
}

TEST_CASE("ingest can consult a dictionary file before truncation") {
  TempDir tmp;
  const auto dict = tmp.file("words.txt", "sun\ninformation\n");
  IngestConfig config;
  config.oov_dictionary_path = dict.string();
  UserDataset dataset = ingest_records({{"u", "sun information b/c"}}, config);
  REQUIRE(dataset.user(0).words().size() == 1);
  CHECK(dataset.user(0).words()[0].sequence == "b/c$");
  CHECK_THROWS_AS((void)ingest_records({{"u", "sun"}}, config), std::runtime_error);  // empty
}

TEST_CASE("synthetic generation follows the table") {
  FrequencyTable all_w{{{"w", 1.0}}};
  UserDataset dataset = generate_synthetic(all_w, 50, 1, 7);
  for (const auto& user : dataset.users()) {
    REQUIRE(user.words().size() == 1);
    CHECK(user.words()[0].sequence == "w$");
  }

  FrequencyTable bad{{{"w", -0.5}}};
  CHECK_THROWS_AS((void)generate_synthetic(bad, 10, 1, 7), std::invalid_argument);
  FrequencyTable over{{{"a", 0.7}, {"b", 0.7}}};
  CHECK_THROWS_AS((void)generate_synthetic(over, 10, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS((void)generate_synthetic(all_w, 0, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS((void)generate_synthetic(all_w, 10, 0, 7), std::invalid_argument);
}

TEST_CASE("synthetic generation is deterministic under the seed") {
  const FrequencyTable& table = fixture_table("sentiment140-top100");
  std::ostringstream a, b, c;
  generate_synthetic(table, 500, 3, 42, 10).dump_jsonl(a);
  generate_synthetic(table, 500, 3, 42, 10).dump_jsonl(b);
  generate_synthetic(table, 500, 3, 43, 10).dump_jsonl(c);
  CHECK(a.str() == b.str());
  CHECK(a.str() != c.str());
}

TEST_CASE("fillers are globally unique and absorb the remainder mass") {
  FrequencyTable table{{{"w", 0.3}}};
  UserDataset dataset = generate_synthetic(table, 2000, 1, 9);
  std::map<std::string, int> population_counts;
  for (const auto& user : dataset.users()) {
    for (const auto& entry : user.words()) population_counts[entry.sequence] += entry.count;
  }
  std::size_t filler_mass = 0;
  for (const auto& [word, count] : population_counts) {
    if (word.front() == '~') {
      CHECK(count == 1);
      filler_mass += count;
    }
  }
  const double filler_fraction = static_cast<double>(filler_mass) / 2000.0;
  CHECK(std::abs(filler_fraction - 0.7) < 0.05);
}

TEST_CASE("the most frequent fixture word appears at its published frequency") {
  const FrequencyTable& table = fixture_table("sentiment140-top100");
  UserDataset dataset = generate_synthetic(table, 100000, 1, 424242, 10);
  std::size_t the_count = 0;
  for (const auto& user : dataset.users()) {
    if (user.words()[0].sequence == "the$") ++the_count;
  }
  const double freq = static_cast<double>(the_count) / 100000.0;
  CHECK(std::abs(freq - 0.1028) <= 0.003);
  check_invariants(dataset, 10);
}

TEST_CASE("bundled fixtures carry the published tables") {
  const FrequencyTable& sent = fixture_table("sentiment140-top100");
  REQUIRE(sent.entries.size() == 100);
  CHECK(sent.entries.front().first == "the");
  CHECK(sent.entries.front().second == doctest::Approx(0.1028));
  CHECK(sent.total() < 1.0);

  const FrequencyTable& oov = fixture_table("oov-top100");
  REQUIRE(oov.entries.size() == 100);
  CHECK(oov.entries.front().first == "dont");
  std::set<std::string> words;
  for (const auto& [word, freq] : oov.entries) {
    CHECK(freq > 0.0);
    words.insert(word);
  }
  CHECK(words.count("*hugs*") == 1);
  CHECK(words.count(":'(") == 1);
  CHECK(words.count("b/c") == 1);
  CHECK(words.count("ya'll") == 1);
  CHECK(oov.total() < 1.0);

  CHECK(triehh::fixture_names().size() == 2);
  CHECK_THROWS_AS((void)fixture_table("nope"), std::invalid_argument);
}

TEST_CASE("zipf tables are normalized and decreasing") {
  const FrequencyTable table = zipf_table(1000, 1.0);
  REQUIRE(table.entries.size() == 1000);
  CHECK(table.total() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < table.entries.size(); ++i) {
    CHECK(table.entries[i].second <= table.entries[i - 1].second);
  }
}

TEST_CASE("dataset JSONL round trip is exact") {
  UserDataset dataset = generate_synthetic(fixture_table("oov-top100"), 300, 4, 3, 10);
  std::ostringstream dumped;
  dataset.dump_jsonl(dumped);
  std::istringstream in(dumped.str());
  UserDataset loaded = UserDataset::load_jsonl(in);
  std::ostringstream again;
  loaded.dump_jsonl(again);
  CHECK(dumped.str() == again.str());
  CHECK(loaded.n() == dataset.n());
  CHECK(loaded.max_sequence_length() == dataset.max_sequence_length());
}

TEST_CASE("population frequencies average the local frequencies") {
  UserDataset dataset = ingest_records({{"a", "sun sun moon"}, {"b", "moon"}}, IngestConfig{});
  const auto freq = dataset.population_frequencies();
  CHECK(freq.at("sun$") == doctest::Approx(1.0 / 3.0));
  CHECK(freq.at("moon$") == doctest::Approx(2.0 / 3.0));
}
