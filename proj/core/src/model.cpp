#include "semisep/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "semisep/error.hpp"

namespace semisep {

namespace {

void check_bounds(double lower, double upper, const std::string& what) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw Error(Errc::NonFinite, what + " has a non-finite bound");
  }
  if (upper <= 0.0) {
    throw Error(Errc::NonPositiveUpper, what + " needs upper > 0");
  }
  if (lower < 0.0) {
    throw Error(Errc::NegativeLower, what + " needs lower >= 0");
  }
  if (lower > upper) {
    std::ostringstream os;
    os << what << " has lower " << lower << " > upper " << upper;
    throw Error(Errc::LowerExceedsUpper, os.str());
  }
}

}  // namespace

Instance::Instance(std::vector<Item> items) : items_(std::move(items)) {
  order_.resize(items_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    return items_[a].relative_lower() < items_[b].relative_lower();
  });
  degenerate_ = std::all_of(items_.begin(), items_.end(),
                            [](const Item& it) { return it.zero_lower(); });
}

Instance Instance::validate(std::vector<Item> items) {
  if (items.empty()) {
    throw Error(Errc::EmptyInstance, "an instance needs at least one item");
  }
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (items[j].name.empty()) items[j].name = "item_" + std::to_string(j);
    check_bounds(items[j].lower, items[j].upper, "item '" + items[j].name + "'");
  }
  return Instance(std::move(items));
}

Instance Instance::from_bounds(std::span<const std::pair<double, double>> bounds) {
  std::vector<Item> items;
  items.reserve(bounds.size());
  for (const auto& [lo, hi] : bounds) items.push_back({"", lo, hi});
  return validate(std::move(items));
}

Instance Instance::from_bounds(std::initializer_list<std::pair<double, double>> bounds) {
  return from_bounds(std::span<const std::pair<double, double>>(bounds.begin(), bounds.size()));
}

std::vector<double> Instance::lowers() const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& it : items_) out.push_back(it.lower);
  return out;
}

std::vector<double> Instance::uppers() const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& it : items_) out.push_back(it.upper);
  return out;
}

bool Instance::contains(std::span<const double> v, double rel_tol) const {
  if (v.size() != items_.size()) return false;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double slack = rel_tol * items_[j].upper;
    if (!(v[j] >= items_[j].lower - slack && v[j] <= items_[j].upper + slack)) return false;
  }
  return true;
}

void Instance::check_contains(std::span<const double> v, double rel_tol) const {
  if (v.size() != items_.size()) {
    throw Error(Errc::ShapeMismatch, "valuation has " + std::to_string(v.size()) +
                                         " entries, instance has " +
                                         std::to_string(items_.size()) + " items");
  }
  if (!contains(v, rel_tol)) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double slack = rel_tol * items_[j].upper;
      if (!(v[j] >= items_[j].lower - slack && v[j] <= items_[j].upper + slack)) {
        std::ostringstream os;
        os << "v[" << j << "] = " << v[j] << " outside [" << items_[j].lower << ", "
           << items_[j].upper << "]";
        throw Error(Errc::OutOfSupport, os.str());
      }
    }
  }
}

bool operator==(const Item& a, const Item& b) {
  return a.name == b.name && a.lower == b.lower && a.upper == b.upper;
}

bool operator==(const Instance& a, const Instance& b) { return a.items_ == b.items_; }

MechanismQuote MechanismQuote::make(std::vector<double> allocation, double payment,
                                    std::span<const double> v, double tol) {
  if (allocation.size() != v.size()) {
    throw Error(Errc::ShapeMismatch, "allocation and valuation sizes differ");
  }
  double surplus = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(allocation[j] >= -tol && allocation[j] <= 1.0 + tol)) {
      throw Error(Errc::DomainError, "allocation outside [0, 1]");
    }
    allocation[j] = std::clamp(allocation[j], 0.0, 1.0);
    surplus += allocation[j] * v[j];
  }
  if (payment < -tol) throw Error(Errc::DomainError, "negative payment");
  payment = std::max(payment, 0.0);
  if (payment > surplus + tol * std::max(1.0, surplus)) {
    std::ostringstream os;
    os << "payment " << payment << " exceeds allocated value " << surplus;
    throw Error(Errc::IrViolation, os.str());
  }
  return MechanismQuote(std::move(allocation), payment, surplus - payment);
}

double ItemPriceLaw::density(double price) const noexcept {
  if (density_start >= upper || price < density_start || price > upper) return 0.0;
  return gamma / price;
}

double ItemPriceLaw::continuous_mass() const noexcept {
  if (density_start >= upper) return 0.0;
  if (density_start <= 0.0) return 1.0;  // e^{-1/gamma} underflowed; mass is 1 analytically
  return gamma * std::log(upper / density_start);
}

double ItemPriceLaw::cdf(double v) const noexcept {
  if (v < lower) return 0.0;
  double p = atom_mass;
  if (density_start < upper && v > density_start) {
    const double top = std::min(v, upper);
    p += density_start > 0.0 ? gamma * std::log(top / density_start) : 1.0;
  }
  return std::min(p, 1.0);
}

double ItemPriceLaw::expected_payment(double v) const noexcept {
  if (v < lower) return 0.0;
  double pay = atom_mass * lower;
  if (density_start < upper && v > density_start) {
    pay += gamma * (std::min(v, upper) - density_start);
  }
  return pay;
}

double ItemPriceLaw::quantile(double u) const noexcept {
  if (u < atom_mass || density_start >= upper) return lower;
  if (gamma <= 0.0) return upper;
  return std::min(upper, density_start * std::exp((u - atom_mass) / gamma));
}

PartitionSpec PartitionSpec::validate(std::size_t item_count, std::vector<Bundle> bundles) {
  std::vector<int> seen(item_count, 0);
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    auto& bundle = bundles[b];
    const std::string what = "bundle " + std::to_string(b);
    if (bundle.members.empty()) throw Error(Errc::UncoveredItem, what + " is empty");
    check_bounds(bundle.lower, bundle.upper, what);
    std::sort(bundle.members.begin(), bundle.members.end());
    for (std::size_t m : bundle.members) {
      if (m >= item_count) {
        throw Error(Errc::InvalidIndex, what + " references item " + std::to_string(m));
      }
      if (seen[m]++ > 0) {
        throw Error(Errc::OverlappingBundles, "item " + std::to_string(m) +
                                                  " appears in more than one bundle");
      }
    }
  }
  for (std::size_t j = 0; j < item_count; ++j) {
    if (seen[j] == 0) {
      throw Error(Errc::UncoveredItem, "item " + std::to_string(j) + " is in no bundle");
    }
  }
  std::sort(bundles.begin(), bundles.end(), [](const Bundle& a, const Bundle& b) {
    return a.members.front() < b.members.front();
  });
  return PartitionSpec{item_count, std::move(bundles)};
}

std::vector<std::size_t> PartitionSpec::bundle_of() const {
  std::vector<std::size_t> out(item_count, 0);
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    for (std::size_t m : bundles[b].members) out[m] = b;
  }
  return out;
}

Instance PartitionSpec::bundle_instance() const {
  std::vector<Item> items;
  items.reserve(bundles.size());
  for (const auto& b : bundles) {
    std::string name = "{";
    for (std::size_t k = 0; k < b.members.size(); ++k) {
      if (k > 0) name += ",";
      name += std::to_string(b.members[k]);
    }
    name += "}";
    items.push_back({name, b.lower, b.upper});
  }
  return Instance::validate(std::move(items));
}

CollectionSpec CollectionSpec::validate(std::size_t item_count, std::vector<Bundle> subsets) {
  for (std::size_t c = 0; c < subsets.size(); ++c) {
    auto& s = subsets[c];
    const std::string what = "subset " + std::to_string(c);
    if (s.members.empty()) throw Error(Errc::DomainError, what + " is empty");
    check_bounds(s.lower, s.upper, what);
    std::sort(s.members.begin(), s.members.end());
    if (std::adjacent_find(s.members.begin(), s.members.end()) != s.members.end()) {
      throw Error(Errc::DomainError, what + " lists an item twice");
    }
    if (s.members.back() >= item_count) {
      throw Error(Errc::InvalidIndex,
                  what + " references item " + std::to_string(s.members.back()));
    }
  }
  return CollectionSpec{item_count, std::move(subsets)};
}

}  // namespace semisep
