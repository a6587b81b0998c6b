#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "triehh/analysis.hpp"
#include "triehh/ingest.hpp"
#include "triehh/privacy.hpp"
#include "triehh/protocol.hpp"
#include "triehh/trie.hpp"

namespace {

std::vector<std::string> sample_sequences(std::size_t count) {
  const triehh::FrequencyTable& table = triehh::fixture_table("sentiment140-top100");
  triehh::Rng rng(7);
  std::vector<std::string> sequences;
  sequences.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    sequences.push_back(table.entries[rng.below(table.entries.size())].first + "$");
  }
  return sequences;
}

void BM_GrowOneLevel(benchmark::State& state) {
  const auto sequences = sample_sequences(static_cast<std::size_t>(state.range(0)));
  triehh::Trie level1;
  for (const auto& seq : sequences) level1.insert_prefix(seq.substr(0, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(triehh::grow_one_level(sequences, level1, 12, 2));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GrowOneLevel)->Arg(1000)->Arg(10000);

void BM_RunSingleWord(benchmark::State& state) {
  const triehh::UserDataset dataset =
      triehh::generate_synthetic(triehh::fixture_table("sentiment140-top100"),
                                 static_cast<std::size_t>(state.range(0)), 1, 11, 10);
  const triehh::PrivacyParams params =
      triehh::choose_parameters(dataset.n(), 10, 2.0, triehh::DeltaMode::inv_n_squared());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        triehh::run_single_word(dataset, params, seed++, triehh::RunOptions{false}));
  }
}
BENCHMARK(BM_RunSingleWord)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SampleUsers(benchmark::State& state) {
  triehh::Rng rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(triehh::sample_users(n, n / 100, rng));
  }
}
BENCHMARK(BM_SampleUsers)->Arg(100000)->Arg(1000000);

void BM_RoundProbability(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  const triehh::PrivacyParams params =
      triehh::choose_parameters(n, 10, 2.0, triehh::DeltaMode::inv_n_squared());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        triehh::round_probability(n, params.batch_size, params.theta, n / 100));
  }
}
BENCHMARK(BM_RoundProbability)->Arg(100000)->Arg(10000000);

void BM_LambertW(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(triehh::lambert_w(x));
    x = x < 1e6 ? x * 1.1 : 0.1;
  }
}
BENCHMARK(BM_LambertW);

void BM_ChooseParameters(benchmark::State& state) {
  std::uint64_t n = 10000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        triehh::choose_parameters(n, 10, 2.0, triehh::DeltaMode::inv_n_squared()));
    n = n < 100000000 ? n * 10 : 10000;
  }
}
BENCHMARK(BM_ChooseParameters);

}  // namespace

BENCHMARK_MAIN();
