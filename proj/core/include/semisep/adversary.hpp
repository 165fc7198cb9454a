#pragma once

// Nature's worst case: a co-monotonic distribution on the ray
// v(xi) = min(omega * xi, upper), xi >= 1, with xi drawn from
//
//   G(1) = 0,   dG/dxi = zeta * sum_j v_j(xi) / xi^2,
//   zeta = 1 / sum_j omega_j (ln(upper_j / omega_j) + 1).
//
// Against this law the best any mechanism can do is post price omega_j on
// each item, which earns zeta * sum_j omega_j.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "semisep/model.hpp"
#include "semisep/scalar.hpp"

namespace semisep::adversary {

/// xi draws are capped here; the tail mass beyond is zeta * sum(upper) / 1e12.
inline constexpr double kXiCap = 1e12;

struct RaySample {
  double xi = 1.0;
  Valuation v;
};

class AdversaryDistribution {
 public:
  /// The ray for parameter eta: omega_j = upper_j e^{-1/eta} on thresholded
  /// items, lower_j elsewhere. Throws DomainError unless 0 < eta <= 1.
  static AdversaryDistribution build(double eta, const Instance& instance);

  /// Ray with an explicit direction, lower_j <= omega_j <= upper_j and
  /// omega_j > 0. Throws DomainError / ShapeMismatch.
  static AdversaryDistribution from_direction(const Instance& instance, Valuation omega);

  [[nodiscard]] std::optional<double> eta() const noexcept { return eta_; }
  [[nodiscard]] const Valuation& omega() const noexcept { return omega_; }
  [[nodiscard]] double zeta() const noexcept { return zeta_; }
  /// Ascending, starting at 1; the last one is where every item is capped.
  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const Instance& instance() const noexcept { return instance_; }

  /// min(omega * xi, upper). Throws DomainError for xi < 1.
  [[nodiscard]] Valuation valuation_at(double xi) const;

  /// G(xi); 0 at or below 1.
  [[nodiscard]] double cdf(double xi) const;
  /// Smallest xi with G(xi) >= u, capped at kXiCap.
  [[nodiscard]] double quantile(double u) const;

  [[nodiscard]] std::vector<RaySample> sample(std::size_t count, std::uint64_t seed) const;
  /// Same law split over `shards` threads; shard k uses seed + k and the
  /// results are concatenated in shard order.
  [[nodiscard]] std::vector<RaySample> sample_sharded(std::size_t count, std::uint64_t seed,
                                                      std::size_t shards) const;

  /// zeta * sum(omega).
  [[nodiscard]] double best_response_value() const;
  /// Posted prices that attain best_response_value.
  [[nodiscard]] const Valuation& optimal_prices() const noexcept { return omega_; }

 private:
  AdversaryDistribution(std::optional<double> eta, Instance instance, Valuation omega);

  std::optional<double> eta_;
  Instance instance_;
  Valuation omega_;
  double zeta_ = 0.0;
  std::vector<double> breakpoints_;
  std::vector<double> caps_;       // upper_j / omega_j per item
  std::vector<double> cdf_at_bp_;  // G at each breakpoint
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits) noexcept;

/// Root of phi, checked against the best-response identity
/// best_response_value(build(eta*)) = eta*. Throws DegenerateInstance when
/// every lower bound is zero and InternalError if the identity fails.
double eta_star(const Instance& instance, double tol = scalar::kDefaultTol);

/// Best-response value of the two-item ray with omega = (omega1, lower_2),
/// items taken in lower/upper order. Throws DomainError unless
/// lower_1 <= omega1 <= upper_1 lower_2 / upper_2.
double two_item_ratio(double omega1, const Instance& instance);

struct OmegaChoice {
  double omega1 = 0.0;
  int which_case = 0;  // 1: interior stationary point; 2: omega1 = lower_1
};

/// Nature's optimal omega1 for the two-item ray.
OmegaChoice two_item_optimal_omega1(const Instance& instance);

}  // namespace semisep::adversary
