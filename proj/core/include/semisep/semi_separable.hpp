#pragma once

// The threshold family M_gamma of semi-separable mechanisms and its optimal
// parameter gamma*.
//
// For gamma in (0, 1], item j is *thresholded* (in the active set S(gamma))
// when ln(lower_j/upper_j) < -1/gamma; items with lower_j = 0 always are.
// A thresholded item is never sold below e^{-1/gamma} upper_j. The optimal
// gamma* is the unique root of the increasing function
//
//   phi(gamma) = gamma e^{-1/gamma} sum_{j in S} upper_j
//              - sum_{j not in S} lower_j (gamma ln(lower_j/upper_j) - gamma + 1)
//
// and M_{gamma*} guarantees gamma* of the hindsight-optimal revenue.

#include <cstddef>
#include <string>
#include <vector>

#include "semisep/model.hpp"
#include "semisep/scalar.hpp"

namespace semisep::semi_separable {

/// Bracket floor for the gamma* search.
inline constexpr double kGammaFloor = 1e-9;

/// Membership in S(gamma). Ties (within a relative 1e-12) count as not
/// thresholded.
bool thresholded(double lower, double upper, double gamma);

/// Items of S(gamma), caller's order.
std::vector<std::size_t> active_set(const Instance& instance, double gamma);

/// phi(gamma). Throws DomainError unless 0 < gamma <= 1.
double phi(double gamma, const Instance& instance);

struct GammaSolution {
  double gamma_star = 0.0;
  std::vector<std::size_t> active_set;
  double phi_residual = 0.0;
  int iterations = 0;
  /// All lower bounds are zero: gamma* = 0 and the mechanism sells nothing.
  bool degenerate = false;
  std::vector<std::string> warnings;
};

GammaSolution solve_gamma_star(const Instance& instance, double tol = scalar::kDefaultTol);

/// Per-item allocation and payment rules of M_gamma.
double item_allocation(double gamma, double lower, double upper, double v);
double item_payment(double gamma, double lower, double upper, double v);

/// q_j = max(0, gamma ln(v_j/upper_j) + 1). gamma = 0 is the empty mechanism.
/// Throws OutOfSupport if v is outside V.
std::vector<double> allocation(double gamma, const Instance& instance,
                               std::span<const double> v);
double payment(double gamma, const Instance& instance, std::span<const double> v);

/// M_gamma bound to an instance.
class Mechanism {
 public:
  Mechanism(double gamma, Instance instance);

  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] const Instance& instance() const noexcept { return instance_; }
  [[nodiscard]] std::vector<double> allocation(std::span<const double> v) const;
  [[nodiscard]] double payment(std::span<const double> v) const;
  [[nodiscard]] MechanismQuote quote(std::span<const double> v) const;

 private:
  double gamma_;
  Instance instance_;
};

struct WorstCase {
  double ratio = 0.0;
  Valuation argmin;
};

/// min over V of payment(v) / sum(v) for M_gamma, with its closed-form argmin:
/// the upper corner when phi(gamma) <= 0, else thresholds on S(gamma) and
/// lower bounds elsewhere. Throws DegenerateInstance if the argmin sums to 0.
WorstCase worst_case_ratio(double gamma, const Instance& instance);

/// Randomized posted prices implementing M_gamma item by item.
PriceLaw price_law(double gamma, const Instance& instance);

struct ClosedForm {
  double gamma = 0.0;
  int which_case = 0;  // 1: item with smaller lower/upper thresholded; 2: neither
};

/// Two-item closed form for gamma* via Lambert-W (case 1) or the weighted
/// harmonic formula (case 2). Items may be given in any order.
/// Throws ShapeMismatch unless the instance has exactly two items.
ClosedForm two_item_closed_form(const Instance& instance);

/// Separable ratio divided by semi-separable ratio when exactly one item has a
/// positive lower bound. Throws ShapeMismatch otherwise.
double gap_vs_separable(const Instance& instance);

/// Semi-separable ratio (1/r_J + W(sum_{j != J} upper_j / (e upper_J)))^{-1}
/// for the same one-positive-lower shape. Throws ShapeMismatch otherwise.
double semi_separable_ratio_zero_lower(const Instance& instance);

}  // namespace semisep::semi_separable
