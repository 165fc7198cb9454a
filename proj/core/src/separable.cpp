#include "semisep/separable.hpp"

#include <cmath>
#include <limits>

#include "semisep/error.hpp"

namespace semisep::separable {

double SingleItemMechanism::allocation(double v) const {
  if (lower == 0.0) return v > 0.0 ? 1.0 : 0.0;
  return (1.0 + std::log(v / lower)) / (1.0 + std::log(upper / lower));
}

double SingleItemMechanism::payment(double v) const { return ratio * v; }

SingleItemMechanism single_item(double lower, double upper) {
  Instance::from_bounds({{lower, upper}});  // throws on bad bounds
  SingleItemMechanism m{lower, upper, 0.0};
  if (lower > 0.0) m.ratio = 1.0 / (1.0 + std::log(upper / lower));
  return m;
}

std::vector<double> item_ratios(const Instance& instance) {
  std::vector<double> r;
  r.reserve(instance.size());
  for (const auto& it : instance.items()) r.push_back(single_item(it.lower, it.upper).ratio);
  return r;
}

JointRatio joint_ratio(const Instance& instance) {
  const auto r = item_ratios(instance);
  const auto& order = instance.ratio_order();
  const std::size_t n = instance.size();

  JointRatio best;
  if (n == 1) {
    best.ratio = r[0];
    best.split = 0;
    best.worst_valuation = {instance.upper(0)};
    return best;
  }
  best.ratio = std::numeric_limits<double>::infinity();
  // split = k: the first k items in ratio order sit at upper, the rest at lower.
  for (std::size_t k = 1; k < n; ++k) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t j = order[pos];
      const double v = pos < k ? instance.upper(j) : instance.lower(j);
      num += r[j] * v;
      den += v;
    }
    const double ratio = num / den;
    if (ratio < best.ratio) {
      best.ratio = ratio;
      best.split = k;
    }
  }
  best.worst_valuation.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t j = order[pos];
    best.worst_valuation[j] = pos < best.split ? instance.upper(j) : instance.lower(j);
  }
  return best;
}

double separable_ratio_zero_lower(const Instance& instance) {
  std::size_t positive = instance.size();
  std::size_t count = 0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (!instance[j].zero_lower()) {
      positive = j;
      ++count;
    }
  }
  if (count != 1) {
    throw Error(Errc::ShapeMismatch,
                "needs exactly one item with a positive lower bound, found " +
                    std::to_string(count));
  }
  double others = 0.0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (j != positive) others += instance.upper(j);
  }
  const auto last = single_item(instance.lower(positive), instance.upper(positive));
  return last.ratio / (others / last.lower + 1.0);
}

}  // namespace semisep::separable
