#include "triehh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace triehh {

namespace {

// Compensated (Kahan) accumulator; keeps long sums of logs near 1 ulp.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// log C(a, b) as a compensated sum of log((a-b'+j)/j). Error stays ~1e-14
// regardless of magnitude, unlike lgamma differences whose absolute error
// grows with the operands.
double log_binomial(std::uint64_t a, std::uint64_t b) {
  if (b > a) throw std::invalid_argument("log_binomial: b > a");
  b = std::min(b, a - b);
  KahanSum acc;
  for (std::uint64_t j = 1; j <= b; ++j) {
    acc.add(std::log(static_cast<double>(a - b + j) / static_cast<double>(j)));
  }
  return acc.sum;
}

// sum_{i=a}^{b} P(X = i) for X ~ Hypergeometric(n, holders, sample), summed
// with a max-shifted log-sum-exp over logs produced by the term recurrence.
double pmf_range_sum(std::uint64_t n, std::uint64_t holders, std::uint64_t sample, std::uint64_t a,
                     std::uint64_t b) {
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(b - a + 1));
  KahanSum log_term;
  log_term.add(log_binomial(holders, a));
  log_term.add(log_binomial(n - holders, sample - a));
  log_term.add(-log_binomial(n, sample));
  logs.push_back(log_term.sum);
  for (std::uint64_t i = a; i < b; ++i) {
    // t_{i+1}/t_i for adjacent hypergeometric terms.
    log_term.add(std::log(static_cast<double>(holders - i) / static_cast<double>(i + 1)));
    log_term.add(std::log(static_cast<double>(sample - i) /
                          static_cast<double>(n - holders - sample + i + 1)));
    logs.push_back(log_term.sum);
  }
  const double shift = *std::max_element(logs.begin(), logs.end());
  KahanSum total;
  for (double l : logs) total.add(std::exp(l - shift));
  return std::exp(shift) * total.sum;
}

}  // namespace

void DiscoveryQuery::validate() const {
  if (n == 0) throw std::invalid_argument("population size n must be positive");
  if (batch_size < 1 || batch_size > n) {
    throw std::invalid_argument("batch size must satisfy 1 <= m <= n");
  }
  if (occurrences > n) throw std::invalid_argument("occurrences W must not exceed n");
  if (theta < 1) throw std::invalid_argument("threshold must be at least 1");
  if (length < 1) throw std::invalid_argument("length must be at least 1");
}

double round_probability(std::uint64_t n, std::uint64_t batch_size, std::uint64_t theta,
                         std::uint64_t occurrences) {
  DiscoveryQuery{n, batch_size, theta, occurrences, 1}.validate();

  // Hypergeometric(n, W, m) and Hypergeometric(n, m, W) coincide; put the
  // smaller count in the sample role so every path is O(min(W, m)).
  std::uint64_t holders = occurrences;
  std::uint64_t sample = batch_size;
  if (holders > sample) std::swap(holders, sample);

  const std::uint64_t support_lo = sample > n - holders ? sample - (n - holders) : 0;
  const std::uint64_t support_hi = holders;  // = min(W, m)
  if (theta > support_hi) return 0.0;
  if (theta <= support_lo) return 1.0;

  // Summing the side below the mode keeps the short, numerically benign sum.
  const double mode = (static_cast<double>(sample) + 1.0) * (static_cast<double>(holders) + 1.0) /
                      (static_cast<double>(n) + 2.0);
  double p;
  if (static_cast<double>(theta) - 1.0 < mode) {
    p = 1.0 - pmf_range_sum(n, holders, sample, support_lo, theta - 1);
  } else {
    p = pmf_range_sum(n, holders, sample, theta, support_hi);
  }
  return std::clamp(p, 0.0, 1.0);
}

double discovery_rate(const DiscoveryQuery& query) {
  query.validate();
  const double per_round = round_probability(query.n, query.batch_size, query.theta,
                                             query.occurrences);
  return std::pow(per_round, static_cast<double>(query.length));
}

std::uint64_t occurrences_from_frequency(double frequency, std::uint64_t n) {
  // Accumulated per-user frequencies can overshoot 1 by a few ulps.
  if (!(frequency >= 0.0) || !(frequency <= 1.0 + 1e-9)) {
    throw std::invalid_argument("frequency must lie in [0, 1]");
  }
  const double scaled = std::min(frequency, 1.0) * static_cast<double>(n);
  const std::uint64_t w = static_cast<std::uint64_t>(std::ceil(scaled - 1e-9));
  return std::min(w, n);
}

namespace {

bool rate_predicate(std::uint64_t n, double frequency, double target_rate, double epsilon,
                    std::size_t max_length, const DeltaMode& mode) {
  PrivacyParams params;
  try {
    params = choose_parameters(n, max_length, epsilon, mode);
  } catch (const std::invalid_argument&) {
    return false;  // no valid parameterization at this population size
  }
  const std::uint64_t w = occurrences_from_frequency(frequency, n);
  DiscoveryQuery query{n, params.batch_size, params.theta, w, max_length};
  return discovery_rate(query) >= target_rate;
}

}  // namespace

std::uint64_t min_population(double frequency, double target_rate, double epsilon,
                             std::size_t max_length, const DeltaMode& mode,
                             std::uint64_t population_cap) {
  if (!(frequency > 0.0) || !(frequency < 1.0)) {
    throw std::invalid_argument("frequency must lie in (0, 1)");
  }
  if (!(target_rate > 0.0) || !(target_rate < 1.0)) {
    throw std::invalid_argument("target rate must lie in (0, 1)");
  }
  auto pred = [&](std::uint64_t n) {
    return rate_predicate(n, frequency, target_rate, epsilon, max_length, mode);
  };

  constexpr std::uint64_t kStart = 16;
  std::uint64_t lo = kStart - 1;  // below any valid parameterization
  std::uint64_t candidate = 0;

  for (;;) {
    // Exponential bracketing from just above the last known failure.
    std::uint64_t hi = 0;
    std::uint64_t probe = std::max<std::uint64_t>(lo + 1, kStart);
    std::uint64_t step = 1;
    for (;;) {
      if (probe > population_cap) break;
      if (pred(probe)) {
        hi = probe;
        break;
      }
      lo = probe;
      if (probe >= population_cap) break;
      probe = std::min(population_cap, probe + step);
      step *= 2;
    }
    if (hi == 0) {
      throw std::runtime_error("no population up to " + std::to_string(population_cap) +
                               " reaches the target discovery rate");
    }
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (pred(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    candidate = hi;

    // Threshold selection jumps at integer boundaries, so the predicate can
    // dip back to false just past a crossing; accept the candidate only if
    // it stays true for the next 3 populations.
    bool stable = true;
    for (std::uint64_t next = candidate + 1; next <= candidate + 3; ++next) {
      if (next > population_cap) break;
      if (!pred(next)) {
        stable = false;
        lo = next;  // re-bracket above the pocket
        break;
      }
    }
    if (stable) return candidate;
  }
}

}  // namespace triehh
