#pragma once

#include <cstdint>

#include "triehh/privacy.hpp"

namespace triehh {

/// Inputs for a worst-case discovery question: how likely is a sequence held
/// by `occurrences` of `n` users to be fully learned?
struct DiscoveryQuery {
  std::uint64_t n = 0;            // population size
  std::uint64_t batch_size = 0;   // users sampled per round (m)
  std::uint64_t theta = 0;        // vote threshold
  std::uint64_t occurrences = 0;  // holders of the sequence (W)
  std::size_t length = 1;         // sequence length incl. EOS; the rate exponent

  void validate() const;
};

/// Upper tail P(X >= theta) for X ~ Hypergeometric(n, occurrences,
/// batch_size): the chance a single round samples at least theta holders.
///
/// Binomials are evaluated as compensated sums of logs (no Stirling error),
/// the shorter tail is summed with a max-shifted log-sum-exp, so results stay
/// accurate to ~1e-12 absolute through n = 10^7 and beyond.
double round_probability(std::uint64_t n, std::uint64_t batch_size, std::uint64_t theta,
                         std::uint64_t occurrences);

/// round_probability ^ length: the worst-case chance of learning the whole
/// sequence when it shares no prefix with any other sequence.
double discovery_rate(const DiscoveryQuery& query);

/// ceil(frequency * n), guarded against floating-point carries when
/// frequency*n is integral.
std::uint64_t occurrences_from_frequency(double frequency, std::uint64_t n);

/// Smallest population n such that parameters chosen for (epsilon, mode,
/// max_length) discover a frequency-`frequency` sequence (occurrences =
/// ceil(f*n)) at rate >= target_rate. Exponential bracketing plus bisection;
/// because the threshold selection jumps at integer boundaries the candidate
/// is only accepted once the predicate also holds at the next 3 populations,
/// re-bracketing upward otherwise. Throws std::runtime_error when no
/// n <= population_cap satisfies the target.
std::uint64_t min_population(double frequency, double target_rate, double epsilon,
                             std::size_t max_length, const DeltaMode& mode,
                             std::uint64_t population_cap = 1'000'000'000ULL);

}  // namespace triehh
