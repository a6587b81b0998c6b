#pragma once

#include <cstdint>
#include <random>

namespace triehh {

/// One SplitMix64 step: advances `state` and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seeded generator with platform-stable draws.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard.
/// Bounded draws use masked rejection instead of
/// std::uniform_int_distribution, whose mapping is implementation-defined, so
/// identical seeds give identical results on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream `stream` of a base seed. Stream seeds are derived
  /// with SplitMix64, so per-round streams never overlap and inserting a
  /// round does not shift later ones.
  static Rng for_stream(std::uint64_t base_seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace triehh
