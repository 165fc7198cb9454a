#pragma once

// Domain types shared by every solver: the valuation box, mechanism quotes,
// posted-price laws and bundle partitions.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace semisep {

/// A buyer valuation, one entry per item (same order as the Instance).
using Valuation = std::vector<double>;

struct Item {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool zero_lower() const noexcept { return lower == 0.0; }
  /// lower/upper, the key used to order items by relative support width.
  [[nodiscard]] double relative_lower() const noexcept { return lower / upper; }
};

/// The support box V = prod_j [lower_j, upper_j].
///
/// Instances are immutable once validated. Items keep the caller's order;
/// algorithms that need items sorted by lower/upper use ratio_order().
class Instance {
 public:
  /// Validates and builds an instance. Throws Error with EmptyInstance,
  /// NonPositiveUpper, LowerExceedsUpper, NegativeLower or NonFinite.
  static Instance validate(std::vector<Item> items);

  /// Convenience for (lower, upper) pairs; items are named "item_<j>".
  static Instance from_bounds(std::span<const std::pair<double, double>> bounds);
  static Instance from_bounds(std::initializer_list<std::pair<double, double>> bounds);

  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] const std::vector<Item>& items() const noexcept { return items_; }
  [[nodiscard]] const Item& operator[](std::size_t j) const { return items_[j]; }
  [[nodiscard]] double lower(std::size_t j) const { return items_[j].lower; }
  [[nodiscard]] double upper(std::size_t j) const { return items_[j].upper; }

  [[nodiscard]] std::vector<double> lowers() const;
  [[nodiscard]] std::vector<double> uppers() const;

  /// True when every lower bound is zero: no positive ratio is attainable.
  [[nodiscard]] bool degenerate() const noexcept { return degenerate_; }

  /// Stable permutation sorting items by increasing lower/upper; ties keep
  /// the original index order.
  [[nodiscard]] const std::vector<std::size_t>& ratio_order() const noexcept {
    return order_;
  }

  /// Throws OutOfSupport (or ShapeMismatch) unless v lies in V, allowing a
  /// relative slack of `rel_tol` on each bound.
  void check_contains(std::span<const double> v, double rel_tol = 1e-12) const;
  [[nodiscard]] bool contains(std::span<const double> v, double rel_tol = 1e-12) const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  explicit Instance(std::vector<Item> items);

  std::vector<Item> items_;
  std::vector<std::size_t> order_;
  bool degenerate_ = false;
};

bool operator==(const Item& a, const Item& b);

/// Raw output of a mechanism at one reported valuation.
struct Outcome {
  std::vector<double> allocation;
  double payment = 0.0;
};

/// An allocation/payment pair validated against the quoting valuation.
///
/// Construction enforces 0 <= allocation_j <= 1, payment >= 0 and individual
/// rationality (payment <= allocation . v).
class MechanismQuote {
 public:
  static MechanismQuote make(std::vector<double> allocation, double payment,
                             std::span<const double> v, double tol = 1e-9);

  [[nodiscard]] const std::vector<double>& allocation() const noexcept { return allocation_; }
  [[nodiscard]] double payment() const noexcept { return payment_; }
  /// allocation . v - payment at the quoting valuation.
  [[nodiscard]] double utility() const noexcept { return utility_; }

 private:
  MechanismQuote(std::vector<double> allocation, double payment, double utility)
      : allocation_(std::move(allocation)), payment_(payment), utility_(utility) {}

  std::vector<double> allocation_;
  double payment_;
  double utility_;
};

/// Randomized posted price for one item: density gamma/p on
/// [density_start, upper] plus an atom at `lower`.
struct ItemPriceLaw {
  double lower = 0.0;
  double upper = 0.0;
  double gamma = 0.0;
  double density_start = 0.0;
  double atom_mass = 0.0;

  [[nodiscard]] double atom_location() const noexcept { return lower; }
  [[nodiscard]] double density(double price) const noexcept;
  [[nodiscard]] double continuous_mass() const noexcept;
  [[nodiscard]] double total_mass() const noexcept { return atom_mass + continuous_mass(); }
  /// P(price <= v): the allocation probability of a buyer with value v.
  [[nodiscard]] double cdf(double v) const noexcept;
  /// E[price ; price <= v]: the expected payment of a buyer with value v.
  [[nodiscard]] double expected_payment(double v) const noexcept;
  /// Inverse CDF; u in [0, 1).
  [[nodiscard]] double quantile(double u) const noexcept;
};

struct PriceLaw {
  std::vector<ItemPriceLaw> items;
};

/// A set of items with bounds on the sum of their valuations.
struct Bundle {
  std::vector<std::size_t> members;
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

/// A partition of the items into bundles (mutually exclusive, exhaustive).
struct PartitionSpec {
  std::size_t item_count = 0;
  std::vector<Bundle> bundles;

  /// Checks bounds, index range and exact coverage; canonicalizes member
  /// order and bundle order (by smallest member). Throws OverlappingBundles,
  /// UncoveredItem, InvalidIndex, LowerExceedsUpper, NegativeLower.
  static PartitionSpec validate(std::size_t item_count, std::vector<Bundle> bundles);

  /// Index of the bundle containing each item.
  [[nodiscard]] std::vector<std::size_t> bundle_of() const;
  /// Bundle-level box instance (one "item" per bundle).
  [[nodiscard]] Instance bundle_instance() const;

  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

/// A collection of bundles with known sum bounds; may overlap.
struct CollectionSpec {
  std::size_t item_count = 0;
  std::vector<Bundle> subsets;

  /// Checks non-empty subsets, index range and ordered bounds; sorts member
  /// lists. Subset order is preserved.
  static CollectionSpec validate(std::size_t item_count, std::vector<Bundle> subsets);
};

}  // namespace semisep
