#include "semisep/bundles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "semisep/error.hpp"

namespace semisep::bundles {

namespace {

constexpr std::size_t kMaxSubsets = 20;
constexpr std::size_t kMaxItems = 15;
constexpr double kTieTol = 1e-12;

std::vector<Bundle> merge_duplicates(const std::vector<Bundle>& subsets) {
  std::vector<Bundle> out;
  std::map<std::vector<std::size_t>, std::size_t> where;
  for (const auto& s : subsets) {
    auto [it, fresh] = where.emplace(s.members, out.size());
    if (fresh) {
      out.push_back(s);
      continue;
    }
    Bundle& kept = out[it->second];
    kept.lower = std::max(kept.lower, s.lower);
    kept.upper = std::min(kept.upper, s.upper);
    if (kept.lower > kept.upper) {
      throw Error(Errc::LowerExceedsUpper,
                  "duplicate subsets have disjoint ranges");
    }
  }
  return out;
}

struct Search {
  const std::vector<Bundle>& subsets;
  std::size_t item_count;
  std::vector<std::vector<std::size_t>> containing;  // subsets holding each item
  std::vector<char> covered;
  std::vector<std::size_t> chosen;
  std::vector<std::vector<std::size_t>> found;

  bool fits(std::size_t s) const {
    return std::none_of(subsets[s].members.begin(), subsets[s].members.end(),
                        [this](std::size_t m) { return covered[m] != 0; });
  }

  void mark(std::size_t s, char value) {
    for (std::size_t m : subsets[s].members) covered[m] = value;
  }

  void run() {
    std::size_t pick = item_count;
    std::size_t fewest = subsets.size() + 1;
    for (std::size_t j = 0; j < item_count; ++j) {
      if (covered[j]) continue;
      const auto n = static_cast<std::size_t>(
          std::count_if(containing[j].begin(), containing[j].end(),
                        [this](std::size_t s) { return fits(s); }));
      if (n < fewest) {
        fewest = n;
        pick = j;
      }
    }
    if (pick == item_count) {
      found.push_back(chosen);
      return;
    }
    if (fewest == 0) return;
    for (std::size_t s : containing[pick]) {
      if (!fits(s)) continue;
      mark(s, 1);
      chosen.push_back(s);
      run();
      chosen.pop_back();
      mark(s, 0);
    }
  }
};

}  // namespace

BundleSolution solve_partition(const PartitionSpec& partition, double tol) {
  const PartitionSpec checked = PartitionSpec::validate(partition.item_count, partition.bundles);
  Instance inst = checked.bundle_instance();
  auto sol = semi_separable::solve_gamma_star(inst, tol);
  PriceLaw law;
  if (sol.gamma_star > 0.0) law = semi_separable::price_law(sol.gamma_star, inst);
  return BundleSolution{checked, std::move(inst), std::move(sol), std::move(law)};
}

MechanismQuote bundle_quote(const BundleSolution& solution, std::span<const double> v) {
  const auto& p = solution.partition;
  if (v.size() != p.item_count) {
    throw Error(Errc::ShapeMismatch, "valuation has " + std::to_string(v.size()) +
                                         " entries, partition covers " +
                                         std::to_string(p.item_count) + " items");
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] >= 0.0) || !std::isfinite(v[j])) {
      throw Error(Errc::OutOfSupport, "v[" + std::to_string(j) + "] must be finite and >= 0");
    }
  }
  const double gamma = solution.gamma();
  std::vector<double> q(v.size(), 0.0);
  double pay = 0.0;
  for (const auto& b : p.bundles) {
    double sum = 0.0;
    for (std::size_t m : b.members) sum += v[m];
    const double slack = 1e-12 * b.upper;
    if (sum < b.lower - slack || sum > b.upper + slack) {
      std::ostringstream os;
      os << "bundle sum " << sum << " outside [" << b.lower << ", " << b.upper << "]";
      throw Error(Errc::BundleSumOutOfRange, os.str());
    }
    const double qb = semi_separable::item_allocation(gamma, b.lower, b.upper, sum);
    for (std::size_t m : b.members) q[m] = qb;
    pay += semi_separable::item_payment(gamma, b.lower, b.upper, sum);
  }
  return MechanismQuote::make(std::move(q), pay, v);
}

std::vector<PartitionSpec> enumerate_partitions(const CollectionSpec& collection) {
  const std::vector<Bundle> subsets = merge_duplicates(collection.subsets);
  const std::size_t n = collection.item_count;
  if (subsets.size() > kMaxSubsets && n > kMaxItems) {
    throw Error(Errc::TooLarge, std::to_string(subsets.size()) + " subsets over " +
                                    std::to_string(n) + " items exceeds the search guard");
  }
  Search search{subsets, n, std::vector<std::vector<std::size_t>>(n),
                std::vector<char>(n, 0), {}, {}};
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t m : subsets[s].members) {
      if (m >= n) throw Error(Errc::InvalidIndex, "subset references item " + std::to_string(m));
      search.containing[m].push_back(s);
    }
  }
  if (n > 0) search.run();

  std::vector<PartitionSpec> out;
  out.reserve(search.found.size());
  for (const auto& pick : search.found) {
    std::vector<Bundle> bundles;
    for (std::size_t s : pick) bundles.push_back(subsets[s]);
    out.push_back(PartitionSpec::validate(n, std::move(bundles)));
  }
  std::stable_sort(out.begin(), out.end(), [](const PartitionSpec& a, const PartitionSpec& b) {
    if (a.bundles.size() != b.bundles.size()) return a.bundles.size() > b.bundles.size();
    // bundles are ordered by smallest member, so bundle_of() is the
    // restricted-growth string
    return a.bundle_of() < b.bundle_of();
  });
  return out;
}

PartitionChoice best_partition(const CollectionSpec& collection, double tol) {
  auto parts = enumerate_partitions(collection);
  if (parts.empty()) {
    throw Error(Errc::NoPartitionExists, "no sub-collection partitions the items");
  }
  std::vector<Candidate> candidates;
  std::size_t best = 0;
  std::vector<BundleSolution> solved;
  solved.reserve(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    solved.push_back(solve_partition(parts[k], tol));
    const double g = solved.back().gamma();
    candidates.push_back({parts[k], g});
    if (k == 0) continue;
    const double incumbent = candidates[best].gamma;
    const bool better = g > incumbent + kTieTol;
    const bool tie_fewer = std::abs(g - incumbent) <= kTieTol &&
                           parts[k].bundles.size() < parts[best].bundles.size();
    if (better || tie_fewer) best = k;
  }
  return PartitionChoice{std::move(solved[best]), std::move(candidates)};
}

}  // namespace semisep::bundles
