#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "triehh/trie.hpp"

using triehh::Alphabet;
using triehh::GrowResult;
using triehh::Trie;
using triehh::extract_prefixes;
using triehh::extract_words;
using triehh::grow_one_level;
using triehh::grow_one_level_with_tally;

namespace {

Trie trie_with(const std::vector<std::string>& prefixes) {
  Trie trie;
  for (const std::string& p : prefixes) trie.insert_prefix(p);
  return trie;
}

// Small random voting instances for the property checks.
struct RandomCase {
  std::vector<std::string> sample;
  Trie trie;
  std::size_t level;
};

RandomCase random_case(std::mt19937_64& gen) {
  static const std::vector<std::string> pool = {
      "sun$", "sum$", "star$", "stop$", "moon$", "mood$", "mad$", "a$", "ab$", "abc$"};
  RandomCase rc;
  const std::size_t count = gen() % 30;
  for (std::size_t i = 0; i < count; ++i) rc.sample.push_back(pool[gen() % pool.size()]);
  rc.level = 1 + gen() % 3;
  // A plausible trie below the level, built from the same pool.
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (gen() % 2 == 0) continue;
    const std::string& w = pool[i];
    for (std::size_t depth = 1; depth < rc.level && depth <= w.size(); ++depth) {
      rc.trie.insert_prefix(w.substr(0, depth));
    }
  }
  return rc;
}

}  // namespace

TEST_CASE("voting adds exactly the prefixes that reach the threshold") {
  GrowResult grown =
      grow_one_level_with_tally({"sun$", "sun$", "star$", "moon$"}, Trie{}, 2, 1);
  CHECK(grown.tally.votes == std::map<std::string, std::uint64_t>{{"m", 1}, {"s", 3}});
  CHECK(grown.added == std::vector<std::string>{"s"});
  CHECK(grown.trie.prefixes() == std::vector<std::string>{"s"});
  CHECK(grown.trie.levels() == 1);
}

TEST_CASE("an empty sample casts no votes") {
  Trie before = trie_with({"s"});
  Trie after = grow_one_level({}, before, 1, 2);
  CHECK(after == before);
}

TEST_CASE("sequences outside the known level-i-1 prefixes do not vote") {
  Trie before = trie_with({"s"});
  GrowResult grown = grow_one_level_with_tally({"moon$"}, before, 1, 2);
  CHECK(grown.tally.votes.empty());
  CHECK(grown.trie == before);
}

TEST_CASE("words are the EOS leaves") {
  CHECK(extract_words(trie_with({"s", "su", "sun", "sun$", "st", "sta"})) ==
        std::vector<std::string>{"sun$"});
  CHECK(extract_words(Trie{}).empty());
  CHECK(extract_words(trie_with({"m", "mo", "moo", "moon", "moon$", "s", "su", "sun", "sun$"})) ==
        std::vector<std::string>{"moon$", "sun$"});
}

TEST_CASE("prefixes enumerate every non-root node") {
  CHECK(extract_prefixes(Trie{}).empty());
  CHECK(extract_prefixes(trie_with({"su"})) == std::vector<std::string>{"s", "su"});

  // Final trie of a run that fully learned sun$ and moon$ while "sta" stopped
  // growing: one entry per distinct non-root node of the three paths.
  Trie fig = trie_with({"sun$", "sta", "moon$"});
  const std::vector<std::string> expected = {"m",  "mo",  "moo", "moon", "moon$", "s",
                                             "st", "sta", "su",  "sun",  "sun$"};
  CHECK(extract_prefixes(fig) == expected);
  CHECK(fig.node_count() == 11);
}

TEST_CASE("growing rejects foreign symbols and interior EOS") {
  CHECK_THROWS_AS((void)grow_one_level({"caf\xc3\xa9$"}, Trie{}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)grow_one_level({"ab$c$"}, Trie{}, 1, 1), std::invalid_argument);
  Alphabet tiny = Alphabet::from_symbols("ab$");
  CHECK_THROWS_AS((void)grow_one_level({"abc$"}, Trie{}, 1, 1, tiny), std::invalid_argument);
  CHECK_NOTHROW((void)grow_one_level({"ab$"}, Trie{}, 1, 1, tiny));
}

TEST_CASE("growing validates level and threshold") {
  CHECK_THROWS_AS((void)grow_one_level({}, Trie{}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)grow_one_level({}, Trie{}, 0, 1), std::invalid_argument);
  // Trie already populated at the requested level.
  CHECK_THROWS_AS((void)grow_one_level({"a$"}, trie_with({"a"}), 1, 1), std::invalid_argument);
}

TEST_CASE("input trie is never mutated and output shares nothing with it") {
  Trie before = trie_with({"s", "m"});
  const auto snapshot = before.to_json();
  Trie after = grow_one_level({"sun$", "sun$", "moon$", "moon$"}, before, 2, 2);
  CHECK(before.to_json() == snapshot);
  CHECK(after.node_count() == 4);
  after.insert_prefix("xx");  // mutating the copy must not leak back
  CHECK(before.to_json() == snapshot);
}

TEST_CASE("threshold monotonicity: a higher threshold yields a subtrie") {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 200; ++i) {
    RandomCase rc = random_case(gen);
    const std::uint64_t theta = 1 + gen() % 4;
    Trie loose = grow_one_level(rc.sample, rc.trie, theta, rc.level);
    Trie tight = grow_one_level(rc.sample, rc.trie, theta + 1 + gen() % 3, rc.level);
    CHECK(tight.is_subtrie_of(loose));
  }
}

TEST_CASE("sample monotonicity: adding a sequence never removes output") {
  std::mt19937_64 gen(42);
  for (int i = 0; i < 200; ++i) {
    RandomCase rc = random_case(gen);
    Trie base = grow_one_level(rc.sample, rc.trie, 2, rc.level);
    rc.sample.push_back("sun$");
    Trie extended = grow_one_level(rc.sample, rc.trie, 2, rc.level);
    CHECK(base.is_subtrie_of(extended));
  }
}

TEST_CASE("permutation invariance: sample order does not matter") {
  std::mt19937_64 gen(43);
  for (int i = 0; i < 100; ++i) {
    RandomCase rc = random_case(gen);
    Trie out = grow_one_level(rc.sample, rc.trie, 2, rc.level);
    std::shuffle(rc.sample.begin(), rc.sample.end(), gen);
    CHECK(grow_one_level(rc.sample, rc.trie, 2, rc.level) == out);
  }
}

TEST_CASE("every added prefix carries at least theta votes (k-anonymity)") {
  std::mt19937_64 gen(44);
  for (int i = 0; i < 200; ++i) {
    RandomCase rc = random_case(gen);
    const std::uint64_t theta = 1 + gen() % 4;
    GrowResult grown = grow_one_level_with_tally(rc.sample, rc.trie, theta, rc.level);
    CHECK(grown.tally.total() <= rc.sample.size());
    for (const std::string& prefix : grown.added) {
      REQUIRE(grown.tally.votes.count(prefix) == 1);
      CHECK(grown.tally.votes.at(prefix) >= theta);
      CHECK(prefix.size() == rc.level);
      CHECK(rc.trie.contains_prefix(std::string_view(prefix).substr(0, rc.level - 1)));
    }
  }
}

TEST_CASE("level isolation: only the grown level changes") {
  std::mt19937_64 gen(45);
  for (int i = 0; i < 100; ++i) {
    RandomCase rc = random_case(gen);
    Trie out = grow_one_level(rc.sample, rc.trie, 1, rc.level);
    auto before = rc.trie.prefixes();
    auto after = out.prefixes();
    for (const std::string& p : after) {
      const bool is_new = std::find(before.begin(), before.end(), p) == before.end();
      if (is_new) CHECK(p.size() == rc.level);
    }
    CHECK(rc.trie.is_subtrie_of(out));
  }
}

TEST_CASE("an EOS node is always a leaf") {
  Trie trie;
  std::vector<std::string> sample = {"ab$", "ab$", "abc$", "abc$"};
  for (std::size_t level = 1; level <= 4; ++level) {
    trie = grow_one_level(sample, trie, 2, level);
  }
  for (const std::string& p : trie.prefixes()) {
    const bool has_interior_eos = p.find('$') != std::string::npos && p.back() != '$';
    CHECK_FALSE(has_interior_eos);
  }
  CHECK(extract_words(trie) == std::vector<std::string>{"ab$", "abc$"});
}

TEST_CASE("trie JSON shape and round trip") {
  Trie trie = trie_with({"su", "m"});
  const nlohmann::json j = trie.to_json();
  CHECK(j.dump() ==
        R"({"node":{"children":[{"children":[],"symbol":"m"},{"children":[{"children":[],"symbol":"u"}],"symbol":"s"}],"symbol":""}})");
  CHECK(Trie::from_json(j) == trie);

  std::mt19937_64 gen(46);
  for (int i = 0; i < 50; ++i) {
    RandomCase rc = random_case(gen);
    Trie grown = grow_one_level(rc.sample, rc.trie, 1, rc.level);
    CHECK(Trie::from_json(grown.to_json()) == grown);
  }
}

TEST_CASE("contains_prefix answers path membership") {
  Trie trie = trie_with({"sun"});
  CHECK(trie.contains_prefix(""));
  CHECK(trie.contains_prefix("s"));
  CHECK(trie.contains_prefix("sun"));
  CHECK_FALSE(trie.contains_prefix("sunn"));
  CHECK_FALSE(trie.contains_prefix("m"));
}
