#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace triehh {

/// How the privacy failure target is chosen.
struct DeltaMode {
  enum class Kind { kInv300n, kInvNSquared, kExplicit };

  Kind kind = Kind::kInvNSquared;
  double explicit_delta = 0.0;

  static DeltaMode inv300n() { return {Kind::kInv300n, 0.0}; }
  static DeltaMode inv_n_squared() { return {Kind::kInvNSquared, 0.0}; }
  static DeltaMode explicit_value(double delta) { return {Kind::kExplicit, delta}; }

  /// Accepts "inv300n", "invn2" and "explicit=<delta>".
  static DeltaMode parse(const std::string& text);

  /// The delta this mode targets for a population of size n.
  double target(std::uint64_t n) const;

  std::string name() const;
};

struct ProtocolParams;  // protocol.hpp

/// Fully resolved parameter tuple. Instances always satisfy the supported
/// ranges 4 <= theta <= sqrt(n) and 1 <= gamma <= sqrt(n)/(theta+1), with
/// epsilon and delta the realized guarantees for (n, max_length, theta,
/// gamma).
struct PrivacyParams {
  std::uint64_t n = 0;
  std::size_t max_length = 0;      // L, longest sequence incl. EOS
  std::uint64_t theta = 0;          // vote threshold
  double gamma = 0.0;               // batch scale
  std::uint64_t batch_size = 0;     // m = floor(gamma * sqrt(n)), at least 1
  double epsilon = 0.0;
  double delta = 0.0;

  /// Validates the ranges and fills the derived fields.
  static PrivacyParams create(std::uint64_t n, std::size_t max_length, std::uint64_t theta,
                              double gamma);

  ProtocolParams protocol() const;

  nlohmann::json to_json() const;
  static PrivacyParams from_json(const nlohmann::json& j);

  /// One aligned human-readable row: n, L, theta, gamma, m, epsilon, delta.
  std::string table_row() const;

  bool operator==(const PrivacyParams&) const = default;
};

/// epsilon = L * ln(1 + 1/(sqrt(n)/(gamma*theta) - 1)).
/// Preconditions: 4 <= theta <= sqrt(n), 1 <= gamma <= sqrt(n)/(theta+1);
/// violations throw std::invalid_argument naming the bound.
double epsilon_from(std::uint64_t n, std::size_t max_length, std::uint64_t theta, double gamma);

/// delta = (theta-2)/((theta-3) * theta!). Exact integer arithmetic through
/// theta = 20; log-gamma beyond that, so large theta neither overflows nor
/// flushes to zero. Requires theta >= 4.
double delta_from(std::uint64_t theta);

/// Principal-branch Lambert W on x >= 0: returns w with w*e^w = x to
/// relative error <= 1e-12. Halley iteration started from ln(1+x), with the
/// step halved whenever it fails to shrink the residual.
double lambert_w(double x);

/// Smallest supported threshold whose realized delta is at most
/// delta_target: max{10, ceil(e^{W(C)+1} - 1/2)} with
/// C = ln(8/(7*sqrt(2*pi)*delta_target))/e, then incremented (never
/// decremented) while delta_from(theta) still exceeds the target.
std::uint64_t select_theta(double delta_target);

/// ceil(log10(n) + 6); requires n >= 10^4. Yields delta <= 1/(300n).
std::uint64_t theta_log_rule(std::uint64_t n);

/// gamma = (e^{eps/L} - 1) * sqrt(n) / (theta * e^{eps/L}); the algebraic
/// inverse of epsilon_from in gamma. Throws when eps > L*ln(theta+1) or when
/// the resulting gamma drops below 1 (population too small).
double select_gamma(std::uint64_t n, std::size_t max_length, double epsilon, std::uint64_t theta);

/// theta from the mode (the log rule for inv300n, the Lambert selection
/// otherwise), gamma from select_gamma, m = floor(gamma*sqrt(n)); validates
/// every range and returns the realized (epsilon, delta).
PrivacyParams choose_parameters(std::uint64_t n, std::size_t max_length, double epsilon,
                                const DeltaMode& mode);

namespace detail {

/// The Lambert-based estimate ceil(e^{W(C)+1} - 1/2) before the floor at 10
/// and the post-hoc delta check are applied.
std::uint64_t lambert_theta_estimate(double delta_target);

/// floor(gamma * sqrt(n)) with a floor of 1.
std::uint64_t batch_size_from(std::uint64_t n, double gamma);

/// True when select_theta had to raise the Lambert estimate to meet the
/// target (approximation slack); exposed for audits.
bool select_theta_was_adjusted(double delta_target);

}  // namespace detail

}  // namespace triehh
