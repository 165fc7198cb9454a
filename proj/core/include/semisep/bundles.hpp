#pragma once

// Semi-separable selling over bundle sums. Each bundle of a partition is
// priced like a single item whose value is the sum of its members' values,
// so the bundle-level instance is handed to the ordinary gamma* solver.

#include <cstddef>
#include <span>
#include <vector>

#include "semisep/model.hpp"
#include "semisep/scalar.hpp"
#include "semisep/semi_separable.hpp"

namespace semisep::bundles {

struct BundleSolution {
  PartitionSpec partition;
  Instance bundle_instance;
  semi_separable::GammaSolution solution;
  /// Empty when the bundle instance is degenerate (gamma = 0).
  PriceLaw price_law;

  [[nodiscard]] double gamma() const noexcept { return solution.gamma_star; }
  [[nodiscard]] const std::vector<std::size_t>& active_bundles() const noexcept {
    return solution.active_set;
  }
};

BundleSolution solve_partition(const PartitionSpec& partition,
                               double tol = scalar::kDefaultTol);

/// Allocation shared by the members of each bundle, payment summed over
/// bundles. Only bundle sums are checked (they must lie in their ranges);
/// throws BundleSumOutOfRange, ShapeMismatch or OutOfSupport (negative v).
MechanismQuote bundle_quote(const BundleSolution& solution, std::span<const double> v);

/// Every exact cover of the items by subsets of the collection. Duplicate
/// subsets are merged first, keeping the intersection of their ranges.
/// Ordered by decreasing bundle count, then by the restricted-growth string
/// (bundle label of each item in order of first appearance).
/// Throws TooLarge beyond 20 subsets unless there are at most 15 items.
std::vector<PartitionSpec> enumerate_partitions(const CollectionSpec& collection);

struct Candidate {
  PartitionSpec partition;
  double gamma = 0.0;
};

struct PartitionChoice {
  BundleSolution best;
  /// In enumeration order.
  std::vector<Candidate> candidates;
};

/// Partition with the largest gamma; ties go to fewer bundles, then to the
/// earlier candidate. Throws NoPartitionExists.
PartitionChoice best_partition(const CollectionSpec& collection,
                               double tol = scalar::kDefaultTol);

}  // namespace semisep::bundles
