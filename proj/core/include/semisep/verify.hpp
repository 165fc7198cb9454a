#pragma once

// Numerical certificates: IC/IR on valuation grids, the worst-case ratio of a
// mechanism, the saddle check for (M_gamma*, F_gamma*), support containment
// and Monte-Carlo ratios under the worst-case law.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semisep/adversary.hpp"
#include "semisep/bundles.hpp"
#include "semisep/model.hpp"

namespace semisep::verify {

/// A mechanism as a black-box quote function. Separable mechanisms also
/// expose per-item payment rules so ratio grids can be summed per axis.
struct Mechanism {
  std::string name;
  std::size_t items = 0;
  std::function<Outcome(std::span<const double>)> quote;
  /// Empty unless payment(v) = sum_j item_payment[j](v_j).
  std::vector<std::function<double(double)>> item_payment;
  /// Valuations worth adding to every grid (e.g. an analytic argmin).
  std::vector<Valuation> candidates;

  [[nodiscard]] bool separable() const noexcept { return !item_payment.empty(); }
};

Mechanism semi_separable_mechanism(double gamma, const Instance& instance);
Mechanism separable_mechanism(const Instance& instance);
Mechanism zero_mechanism(std::size_t items);
/// Sell the grand bundle at `price`: q = 1 and t = price iff sum(v) >= price.
Mechanism grand_bundle_price(double price, std::size_t items);
Mechanism bundle_mechanism(const bundles::BundleSolution& solution);
/// Adds `delta` to every payment (fault injection).
Mechanism with_payment_offset(Mechanism mechanism, double delta);

/// Geometric grid from lower (or 1e-6 upper when lower = 0) to upper,
/// with 0 prepended in the zero-lower case. A single point if lower = upper.
std::vector<double> log_grid(double lower, double upper, int points);

/// Per-dimension grid axes with the mechanism's candidate coordinates merged in.
std::vector<std::vector<double>> grid_axes(const Instance& instance, int points,
                                           std::span<const Valuation> candidates = {});

struct IcIrReport {
  double max_ic_violation = 0.0;
  double max_ir_violation = 0.0;
  std::size_t points = 0;
  Valuation worst_ic_truth;
  Valuation worst_ic_report;
};

/// Pairwise IC over the tensor grid and IR at every grid point.
/// Throws TooLarge beyond 4 items, 40 points per item or ~2e9 pairs.
IcIrReport check_ic_ir(const Mechanism& mechanism, const Instance& instance,
                       int points_per_dim);
/// Same check over an explicit set of valuations.
IcIrReport check_ic_ir_points(const Mechanism& mechanism, std::span<const Valuation> points);
/// IC one coordinate at a time along each axis (sufficient for
/// semi-separable mechanisms); works for any number of items.
IcIrReport check_ic_ir_per_item(const Mechanism& mechanism, const Instance& instance,
                                int points_per_dim);

struct RatioMin {
  double ratio = 0.0;
  Valuation argmin;
  std::size_t points = 0;
};

/// min of payment(v) / sum(v) over the tensor grid, corners and candidates
/// included. Points with sum(v) = 0 are skipped.
RatioMin grid_min_ratio(const Mechanism& mechanism, const Instance& instance,
                        int points_per_dim);

/// sum_j max over a log-spaced xi grid on [1, 10 * last breakpoint] of
/// v_j(xi) zeta / xi.
double discretized_best_response(const adversary::AdversaryDistribution& dist, int xi_points);

struct SaddleOptions {
  double tol = 1e-6;
  int grid = 200;
  int ic_grid = 12;
  int xi_grid = 10000;
  /// Test M_gamma and F_gamma at this gamma instead of gamma*.
  std::optional<double> gamma_override;
};

struct SaddleReport {
  double gamma_star = 0.0;
  double gamma_tested = 0.0;
  double grid_min_ratio = 0.0;
  Valuation grid_argmin;
  double best_response_value = 0.0;  // discretized
  double best_response_exact = 0.0;  // zeta * sum(omega)
  double max_ic_violation = 0.0;
  double max_ir_violation = 0.0;
  int grid_resolution = 0;
  int ic_grid_resolution = 0;
  std::string ic_method;
  bool pass = false;
};

/// Throws DegenerateInstance when every lower bound is zero.
SaddleReport saddle_certificate(const Instance& instance, const SaddleOptions& options = {});

struct Halfspace {
  std::vector<double> a;
  double b = 0.0;
};

/// True iff every vertex of the ray path (xi = 1 and each breakpoint)
/// satisfies a . v <= b for all halfspaces.
bool support_containment(const adversary::AdversaryDistribution& dist,
                         std::span<const Halfspace> halfspaces);

struct MonteCarlo {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean of payment(v)/sum(v) over n draws from dist.
MonteCarlo monte_carlo_ratio(const Mechanism& mechanism,
                             const adversary::AdversaryDistribution& dist, std::size_t n,
                             std::uint64_t seed);

}  // namespace semisep::verify
