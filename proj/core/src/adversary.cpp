#include "semisep/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <sstream>

#include "semisep/error.hpp"
#include "semisep/semi_separable.hpp"

namespace semisep::adversary {

namespace {

const Item& ordered_item(const Instance& instance, std::size_t k) {
  return instance[instance.ratio_order()[k]];
}

void require_two(const Instance& instance) {
  if (instance.size() != 2) throw Error(Errc::ShapeMismatch, "needs exactly two items");
}

}  // namespace

double unit_uniform(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

AdversaryDistribution::AdversaryDistribution(std::optional<double> eta, Instance instance,
                                             Valuation omega)
    : eta_(eta), instance_(std::move(instance)), omega_(std::move(omega)) {
  const std::size_t n = omega_.size();
  double mass = 0.0;
  caps_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double up = instance_.upper(j);
    caps_[j] = up / omega_[j];
    mass += omega_[j] * (std::log(up / omega_[j]) + 1.0);
  }
  zeta_ = 1.0 / mass;

  std::vector<double> bp = caps_;
  bp.push_back(1.0);
  std::sort(bp.begin(), bp.end());
  for (double x : bp) {
    if (breakpoints_.empty() || x - breakpoints_.back() > 1e-12 * x) {
      breakpoints_.push_back(x);
    } else {
      breakpoints_.back() = std::max(breakpoints_.back(), x);
    }
  }
  breakpoints_.front() = 1.0;
  cdf_at_bp_.reserve(breakpoints_.size());
  for (double x : breakpoints_) cdf_at_bp_.push_back(cdf(x));
}

AdversaryDistribution AdversaryDistribution::build(double eta, const Instance& instance) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "eta must lie in (0, 1], got " << eta;
    throw Error(Errc::DomainError, os.str());
  }
  Valuation omega(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const double lo = instance.lower(j);
    const double up = instance.upper(j);
    omega[j] = semi_separable::thresholded(lo, up, eta) ? up * std::exp(-1.0 / eta) : lo;
    if (!(omega[j] > 0.0)) {
      throw Error(Errc::DomainError, "ray direction underflows to zero; eta too small");
    }
  }
  return AdversaryDistribution(eta, instance, std::move(omega));
}

AdversaryDistribution AdversaryDistribution::from_direction(const Instance& instance,
                                                            Valuation omega) {
  if (omega.size() != instance.size()) {
    throw Error(Errc::ShapeMismatch, "direction and instance sizes differ");
  }
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const double slack = 1e-12 * instance.upper(j);
    if (!(omega[j] > 0.0) || omega[j] < instance.lower(j) - slack ||
        omega[j] > instance.upper(j) + slack) {
      std::ostringstream os;
      os << "omega[" << j << "] = " << omega[j] << " must be positive and inside ["
         << instance.lower(j) << ", " << instance.upper(j) << "]";
      throw Error(Errc::DomainError, os.str());
    }
    omega[j] = std::clamp(omega[j], instance.lower(j), instance.upper(j));
  }
  return AdversaryDistribution(std::nullopt, instance, std::move(omega));
}

Valuation AdversaryDistribution::valuation_at(double xi) const {
  if (!(xi >= 1.0)) throw Error(Errc::DomainError, "xi must be at least 1");
  Valuation v(omega_.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = xi >= caps_[j] ? instance_.upper(j) : std::min(omega_[j] * xi, instance_.upper(j));
  }
  return v;
}

double AdversaryDistribution::cdf(double xi) const {
  if (!(xi > 1.0)) return 0.0;
  const double log_xi = std::log(xi);
  double g = 0.0;
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    if (xi <= caps_[j]) {
      g += omega_[j] * log_xi;
    } else {
      g += omega_[j] * std::log(caps_[j]) + omega_[j] - instance_.upper(j) / xi;
    }
  }
  return std::clamp(zeta_ * g, 0.0, 1.0);
}

double AdversaryDistribution::quantile(double u) const {
  if (!(u > 0.0)) return 1.0;
  if (u >= cdf_at_bp_.back()) {
    const double total_upper =
        std::accumulate(instance_.items().begin(), instance_.items().end(), 0.0,
                        [](double s, const Item& it) { return s + it.upper; });
    if (u >= 1.0) return kXiCap;
    const double xi = zeta_ * total_upper / (1.0 - u);
    return std::clamp(xi, breakpoints_.back(), kXiCap);
  }
  const auto it = std::upper_bound(cdf_at_bp_.begin(), cdf_at_bp_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - cdf_at_bp_.begin());
  const double lo = breakpoints_[k - 1];
  const double hi = breakpoints_[k];
  const auto r = scalar::bisect_root([&](double x) { return cdf(x) - u; }, lo, hi,
                                     1e-14 * hi);
  return r.root;
}

std::vector<RaySample> AdversaryDistribution::sample(std::size_t count,
                                                     std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<RaySample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double xi = quantile(unit_uniform(rng()));
    out.push_back({xi, valuation_at(xi)});
  }
  return out;
}

std::vector<RaySample> AdversaryDistribution::sample_sharded(std::size_t count,
                                                             std::uint64_t seed,
                                                             std::size_t shards) const {
  shards = std::max<std::size_t>(shards, 1);
  std::vector<std::future<std::vector<RaySample>>> parts;
  parts.reserve(shards);
  for (std::size_t k = 0; k < shards; ++k) {
    const std::size_t n = count / shards + (k < count % shards ? 1 : 0);
    parts.push_back(std::async(std::launch::async,
                               [this, n, s = seed + k] { return sample(n, s); }));
  }
  std::vector<RaySample> out;
  out.reserve(count);
  for (auto& p : parts) {
    auto chunk = p.get();
    std::move(chunk.begin(), chunk.end(), std::back_inserter(out));
  }
  return out;
}

double AdversaryDistribution::best_response_value() const {
  return zeta_ * std::accumulate(omega_.begin(), omega_.end(), 0.0);
}

double eta_star(const Instance& instance, double tol) {
  const auto sol = semi_separable::solve_gamma_star(instance, tol);
  if (sol.degenerate) {
    throw Error(Errc::DegenerateInstance, "every lower bound is zero; the ray is undefined");
  }
  const double value = AdversaryDistribution::build(sol.gamma_star, instance).best_response_value();
  if (std::abs(value - sol.gamma_star) > std::max(tol, 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "best response " << value << " differs from eta* " << sol.gamma_star;
    throw Error(Errc::InternalError, os.str());
  }
  return sol.gamma_star;
}

double two_item_ratio(double omega1, const Instance& instance) {
  require_two(instance);
  const Item& a = ordered_item(instance, 0);
  const Item& b = ordered_item(instance, 1);
  if (b.zero_lower()) {
    throw Error(Errc::DegenerateInstance, "both lower bounds are zero");
  }
  const double hi = a.upper * b.lower / b.upper;
  const double slack = 1e-12 * a.upper;
  if (!(omega1 >= a.lower - slack && omega1 <= hi + slack) || !(omega1 > 0.0)) {
    std::ostringstream os;
    os << "omega1 = " << omega1 << " outside [" << a.lower << ", " << hi << "]";
    throw Error(Errc::DomainError, os.str());
  }
  const double den = omega1 * std::log(a.upper / omega1) + omega1 +
                     b.lower * std::log(b.upper / b.lower) + b.lower;
  return (omega1 + b.lower) / den;
}

OmegaChoice two_item_optimal_omega1(const Instance& instance) {
  require_two(instance);
  const Item& a = ordered_item(instance, 0);
  const Item& b = ordered_item(instance, 1);
  if (b.zero_lower()) {
    throw Error(Errc::DegenerateInstance, "both lower bounds are zero");
  }
  const auto foc = [&](double w) {
    return w + b.lower * (std::log(b.upper * w / (b.lower * a.upper)) + 1.0);
  };
  if (!a.zero_lower() && foc(a.lower) >= 0.0) return {a.lower, 2};
  const double hi = a.upper * b.lower / b.upper;
  const double lo = a.zero_lower() ? hi * 1e-12 : a.lower;
  const auto r = scalar::bisect_root(foc, lo, hi, 1e-15 * hi);
  return {r.root, 1};
}

}  // namespace semisep::adversary
