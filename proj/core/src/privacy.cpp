#include "triehh/privacy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "triehh/protocol.hpp"

namespace triehh {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// ceil(x) that tolerates values sitting a hair above an integer.
std::uint64_t ceil_guarded(double x) {
  double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

void check_supported_ranges(std::uint64_t n, std::size_t max_length, std::uint64_t theta,
                          double gamma) {
  if (n == 0) throw std::invalid_argument("population size n must be positive");
  if (max_length == 0) throw std::invalid_argument("max sequence length must be positive");
  if (theta < 4) throw std::invalid_argument("threshold range violated: theta >= 4 required");
  if (theta * theta > n) {
    throw std::invalid_argument("threshold range violated: theta <= sqrt(n) required (theta=" +
                                std::to_string(theta) + ", n=" + std::to_string(n) + ")");
  }
  if (gamma < 1.0) {
    throw std::invalid_argument("batch scale range violated: gamma >= 1 required (gamma=" +
                                std::to_string(gamma) + ")");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  if (gamma > sqrt_n / static_cast<double>(theta + 1)) {
    throw std::invalid_argument(
        "batch scale range violated: gamma <= sqrt(n)/(theta+1) required (gamma=" +
        std::to_string(gamma) + ", bound=" + std::to_string(sqrt_n / (theta + 1.0)) + ")");
  }
}

}  // namespace

DeltaMode DeltaMode::parse(const std::string& text) {
  if (text == "inv300n") return inv300n();
  if (text == "invn2") return inv_n_squared();
  constexpr std::string_view prefix = "explicit=";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t consumed = 0;
    double delta = 0.0;
    const std::string value = text.substr(prefix.size());
    try {
      delta = std::stod(value, &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse delta value in \"" + text + "\"");
    }
    if (consumed != value.size() || !(delta > 0.0) || !(delta < 1.0)) {
      throw std::invalid_argument("explicit delta must lie in (0, 1), got \"" + value + "\"");
    }
    return explicit_value(delta);
  }
  throw std::invalid_argument("unknown delta mode \"" + text +
                              "\" (expected inv300n, invn2 or explicit=<delta>)");
}

double DeltaMode::target(std::uint64_t n) const {
  switch (kind) {
    case Kind::kInv300n:
      return 1.0 / (300.0 * static_cast<double>(n));
    case Kind::kInvNSquared:
      return 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    case Kind::kExplicit:
      return explicit_delta;
  }
  throw std::logic_error("unreachable");
}

std::string DeltaMode::name() const {
  switch (kind) {
    case Kind::kInv300n:
      return "inv300n";
    case Kind::kInvNSquared:
      return "invn2";
    case Kind::kExplicit: {
      std::ostringstream os;
      os << "explicit=" << explicit_delta;
      return os.str();
    }
  }
  throw std::logic_error("unreachable");
}

double epsilon_from(std::uint64_t n, std::size_t max_length, std::uint64_t theta, double gamma) {
  check_supported_ranges(n, max_length, theta, gamma);
  const double x = std::sqrt(static_cast<double>(n)) / (gamma * static_cast<double>(theta));
  if (!(x > 1.0)) {
    throw std::invalid_argument("batch scale range violated: gamma*theta < sqrt(n) required");
  }
  return static_cast<double>(max_length) * std::log1p(1.0 / (x - 1.0));
}

double delta_from(std::uint64_t theta) {
  if (theta < 4) throw std::invalid_argument("delta is defined for theta >= 4 only");
  if (theta <= 20) {
    // theta! fits in 64 bits through 20!.
    std::uint64_t factorial = 1;
    for (std::uint64_t k = 2; k <= theta; ++k) factorial *= k;
    return static_cast<double>(theta - 2) /
           (static_cast<double>(theta - 3) * static_cast<double>(factorial));
  }
  const double log_delta = std::log(static_cast<double>(theta - 2)) -
                           std::log(static_cast<double>(theta - 3)) -
                           std::lgamma(static_cast<double>(theta) + 1.0);
  return std::exp(log_delta);
}

double lambert_w(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("lambert_w supports x >= 0 only");
  if (x == 0.0) return 0.0;

  double w = std::log1p(x);  // upper bound of W on x >= 0; converges from above
  double residual = w * std::exp(w) - x;
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= 1e-15 * (std::abs(x) + 1e-300)) break;
    const double fprime = ew * (w + 1.0);
    double step = f / (fprime - (w + 2.0) * f / (2.0 * w + 2.0));
    double next = w - step;
    double next_residual = next * std::exp(next) - x;
    // Damping: halve the step until the residual shrinks.
    for (int halvings = 0; halvings < 60 && std::abs(next_residual) > std::abs(residual);
         ++halvings) {
      step *= 0.5;
      next = w - step;
      next_residual = next * std::exp(next) - x;
    }
    const bool converged = std::abs(next - w) <= 1e-14 * std::max(std::abs(next), 1e-300);
    w = next;
    residual = next_residual;
    if (converged) break;
  }
  return w;
}

namespace detail {

std::uint64_t lambert_theta_estimate(double delta_target) {
  if (!(delta_target > 0.0) || !(delta_target < 1.0)) {
    throw std::invalid_argument("delta target must lie in (0, 1)");
  }
  const double c = std::log(8.0 / (7.0 * std::sqrt(kTwoPi) * delta_target)) / std::exp(1.0);
  if (c <= 0.0) return 1;
  return ceil_guarded(std::exp(lambert_w(c) + 1.0) - 0.5);
}

std::uint64_t batch_size_from(std::uint64_t n, double gamma) {
  const double m = std::floor(gamma * std::sqrt(static_cast<double>(n)));
  return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
}

bool select_theta_was_adjusted(double delta_target) {
  const std::uint64_t base = std::max<std::uint64_t>(10, lambert_theta_estimate(delta_target));
  return delta_from(base) > delta_target;
}

}  // namespace detail

std::uint64_t select_theta(double delta_target) {
  std::uint64_t theta = std::max<std::uint64_t>(10, detail::lambert_theta_estimate(delta_target));
  // The Lambert step approximates; never loosen, only tighten.
  while (delta_from(theta) > delta_target) ++theta;
  return theta;
}

std::uint64_t theta_log_rule(std::uint64_t n) {
  if (n < 10000) {
    throw std::invalid_argument("theta_log_rule requires n >= 10^4, got " + std::to_string(n));
  }
  return ceil_guarded(std::log10(static_cast<double>(n)) + 6.0);
}

double select_gamma(std::uint64_t n, std::size_t max_length, double epsilon, std::uint64_t theta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (theta < 4) throw std::invalid_argument("threshold range violated: theta >= 4 required");
  const double length = static_cast<double>(max_length);
  if (epsilon > length * std::log(static_cast<double>(theta + 1))) {
    throw std::invalid_argument(
        "epsilon exceeds L*ln(theta+1); the implied gamma would break gamma <= sqrt(n)/(theta+1)");
  }
  const double gamma = -std::expm1(-epsilon / length) * std::sqrt(static_cast<double>(n)) /
                       static_cast<double>(theta);
  if (gamma < 1.0) {
    throw std::invalid_argument(
        "population too small for this (epsilon, theta, L): gamma >= 1 violated (gamma=" +
        std::to_string(gamma) + ", n=" + std::to_string(n) + ")");
  }
  return gamma;
}

PrivacyParams PrivacyParams::create(std::uint64_t n, std::size_t max_length, std::uint64_t theta,
                                    double gamma) {
  check_supported_ranges(n, max_length, theta, gamma);
  PrivacyParams params;
  params.n = n;
  params.max_length = max_length;
  params.theta = theta;
  params.gamma = gamma;
  params.batch_size = detail::batch_size_from(n, gamma);
  params.epsilon = epsilon_from(n, max_length, theta, gamma);
  params.delta = delta_from(theta);
  return params;
}

ProtocolParams PrivacyParams::protocol() const {
  return ProtocolParams{theta, batch_size, max_length};
}

nlohmann::json PrivacyParams::to_json() const {
  return nlohmann::json{{"n", n},         {"max_length", max_length}, {"theta", theta},
                        {"gamma", gamma}, {"batch_size", batch_size}, {"epsilon", epsilon},
                        {"delta", delta}};
}

PrivacyParams PrivacyParams::from_json(const nlohmann::json& j) {
  PrivacyParams params = create(j.at("n").get<std::uint64_t>(),
                                j.at("max_length").get<std::size_t>(),
                                j.at("theta").get<std::uint64_t>(), j.at("gamma").get<double>());
  return params;
}

std::string PrivacyParams::table_row() const {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed;
  os << "n=" << n << "  L=" << max_length << "  theta=" << theta << "  gamma=" << gamma
     << "  m=" << batch_size << "  epsilon=" << epsilon;
  os.precision(3);
  os << std::scientific << "  delta=" << delta;
  return os.str();
}

PrivacyParams choose_parameters(std::uint64_t n, std::size_t max_length, double epsilon,
                                const DeltaMode& mode) {
  const std::uint64_t theta = mode.kind == DeltaMode::Kind::kInv300n
                                  ? theta_log_rule(n)
                                  : select_theta(mode.target(n));
  const double gamma = select_gamma(n, max_length, epsilon, theta);
  return PrivacyParams::create(n, max_length, theta, gamma);
}

}  // namespace triehh
