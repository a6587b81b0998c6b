#include "triehh/rng.hpp"

#include <stdexcept>

namespace triehh {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::for_stream(std::uint64_t base_seed, std::uint64_t stream) {
  std::uint64_t state = base_seed;
  splitmix64(state);
  state ^= 0xA0761D6478BD642FULL * (stream + 1);
  std::uint64_t seed = splitmix64(state);
  return Rng(seed);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  // Masked rejection: unbiased and identical on every platform.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t candidate = engine_() & mask;
    if (candidate < bound) return candidate;
  }
}

double Rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace triehh
