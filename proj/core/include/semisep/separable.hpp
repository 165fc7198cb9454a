#pragma once

// Separate selling: each item sold by the optimal one-dimensional robust
// mechanism for its own support, ignoring the other items.

#include <cstddef>

#include "semisep/model.hpp"

namespace semisep::separable {

/// Optimal single-item mechanism on [lower, upper]:
///   q(v) = (1 + ln(v/lower)) / (1 + ln(upper/lower)),  t(v) = ratio * v.
/// With lower = 0 the ratio is 0 and the mechanism degenerates to q = 1, t = 0.
struct SingleItemMechanism {
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 0.0;

  [[nodiscard]] double allocation(double v) const;
  [[nodiscard]] double payment(double v) const;
};

SingleItemMechanism single_item(double lower, double upper);

struct JointRatio {
  double ratio = 0.0;
  /// Number of items (in lower/upper order) placed at their upper bound by
  /// the worst case; 0 for a single-item instance.
  std::size_t split = 0;
  /// Worst-case valuation in the caller's item order.
  Valuation worst_valuation;
};

/// Competitive ratio of selling every item separately: the minimum of
/// sum r_j v_j / sum v_j over V, attained at a corner where the items with
/// the smallest lower/upper sit at their upper bounds.
JointRatio joint_ratio(const Instance& instance);

/// Separable ratio when exactly one item has a positive lower bound:
/// r_J / (sum_{j != J} upper_j / lower_J + 1). Throws ShapeMismatch otherwise.
double separable_ratio_zero_lower(const Instance& instance);

/// Per-item ratios r_j in the caller's order.
std::vector<double> item_ratios(const Instance& instance);

}  // namespace semisep::separable
