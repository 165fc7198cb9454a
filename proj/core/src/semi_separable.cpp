#include "semisep/semi_separable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "semisep/error.hpp"
#include "semisep/separable.hpp"

namespace semisep::semi_separable {

namespace {

void require_gamma_open(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    std::ostringstream os;
    os << "gamma must lie in (0, 1], got " << gamma;
    throw Error(Errc::DomainError, os.str());
  }
}

void require_gamma_closed(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    std::ostringstream os;
    os << "gamma must lie in [0, 1], got " << gamma;
    throw Error(Errc::DomainError, os.str());
  }
}

double threshold_point(double gamma, double upper) { return std::exp(-1.0 / gamma) * upper; }

// The single item with a positive lower bound, or ShapeMismatch.
std::size_t sole_positive_lower(const Instance& instance) {
  std::size_t found = instance.size();
  std::size_t count = 0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (!instance[j].zero_lower()) {
      found = j;
      ++count;
    }
  }
  if (count != 1) {
    throw Error(Errc::ShapeMismatch,
                "needs exactly one item with a positive lower bound, found " +
                    std::to_string(count));
  }
  return found;
}

}  // namespace

bool thresholded(double lower, double upper, double gamma) {
  if (lower == 0.0) return true;
  if (gamma <= 0.0) return false;
  const double log_ratio = std::log(lower / upper);
  const double x = log_ratio + 1.0 / gamma;
  const double scale = std::max(std::abs(log_ratio), 1.0 / gamma);
  return x < -1e-12 * scale;
}

std::vector<std::size_t> active_set(const Instance& instance, double gamma) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (thresholded(instance.lower(j), instance.upper(j), gamma)) s.push_back(j);
  }
  return s;
}

double phi(double gamma, const Instance& instance) {
  require_gamma_open(gamma);
  const double decay = gamma * std::exp(-1.0 / gamma);
  double value = 0.0;
  for (const auto& it : instance.items()) {
    if (thresholded(it.lower, it.upper, gamma)) {
      value += decay * it.upper;
    } else {
      value -= it.lower * (gamma * std::log(it.lower / it.upper) - gamma + 1.0);
    }
  }
  return value;
}

GammaSolution solve_gamma_star(const Instance& instance, double tol) {
  GammaSolution sol;
  if (instance.degenerate()) {
    sol.gamma_star = 0.0;
    sol.degenerate = true;
    sol.active_set.resize(instance.size());
    std::iota(sol.active_set.begin(), sol.active_set.end(), std::size_t{0});
    sol.warnings.emplace_back(
        "every lower bound is zero: no positive competitive ratio is attainable");
    return sol;
  }
  const auto f = [&instance](double g) { return phi(g, instance); };
  const double at_one = f(1.0);
  if (at_one <= 0.0) {
    sol.gamma_star = 1.0;
    sol.phi_residual = at_one;
    sol.active_set = active_set(instance, 1.0);
    sol.warnings.emplace_back("phi(1) <= 0; returning gamma* = 1");
    return sol;
  }
  const auto root = scalar::bisect_root(f, kGammaFloor, 1.0, tol);
  sol.gamma_star = root.root;
  sol.phi_residual = root.residual;
  sol.iterations = root.iterations;
  sol.active_set = active_set(instance, sol.gamma_star);
  return sol;
}

double item_allocation(double gamma, double /*lower*/, double upper, double v) {
  if (gamma == 0.0 || v <= 0.0) return 0.0;
  return std::max(0.0, gamma * std::log(v / upper) + 1.0);
}

double item_payment(double gamma, double lower, double upper, double v) {
  if (gamma == 0.0) return 0.0;
  if (thresholded(lower, upper, gamma)) {
    return gamma * std::max(0.0, v - threshold_point(gamma, upper));
  }
  return gamma * v + lower * (gamma * (std::log(lower / upper) - 1.0) + 1.0);
}

std::vector<double> allocation(double gamma, const Instance& instance,
                               std::span<const double> v) {
  require_gamma_closed(gamma);
  instance.check_contains(v);
  std::vector<double> q(instance.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    q[j] = item_allocation(gamma, instance.lower(j), instance.upper(j), v[j]);
  }
  return q;
}

double payment(double gamma, const Instance& instance, std::span<const double> v) {
  require_gamma_closed(gamma);
  instance.check_contains(v);
  double t = 0.0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    t += item_payment(gamma, instance.lower(j), instance.upper(j), v[j]);
  }
  return t;
}

Mechanism::Mechanism(double gamma, Instance instance)
    : gamma_(gamma), instance_(std::move(instance)) {
  require_gamma_closed(gamma);
}

std::vector<double> Mechanism::allocation(std::span<const double> v) const {
  return semi_separable::allocation(gamma_, instance_, v);
}

double Mechanism::payment(std::span<const double> v) const {
  return semi_separable::payment(gamma_, instance_, v);
}

MechanismQuote Mechanism::quote(std::span<const double> v) const {
  return MechanismQuote::make(allocation(v), payment(v), v);
}

WorstCase worst_case_ratio(double gamma, const Instance& instance) {
  require_gamma_open(gamma);
  WorstCase wc;
  wc.argmin.resize(instance.size());
  if (phi(gamma, instance) <= 0.0) {
    wc.argmin = instance.uppers();
  } else {
    for (std::size_t j = 0; j < instance.size(); ++j) {
      wc.argmin[j] = thresholded(instance.lower(j), instance.upper(j), gamma)
                         ? std::max(instance.lower(j), threshold_point(gamma, instance.upper(j)))
                         : instance.lower(j);
    }
  }
  const double total = std::accumulate(wc.argmin.begin(), wc.argmin.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(Errc::DegenerateInstance, "worst-case valuation sums to zero");
  }
  wc.ratio = payment(gamma, instance, wc.argmin) / total;
  return wc;
}

PriceLaw price_law(double gamma, const Instance& instance) {
  require_gamma_open(gamma);
  PriceLaw law;
  law.items.reserve(instance.size());
  for (const auto& it : instance.items()) {
    ItemPriceLaw item;
    item.lower = it.lower;
    item.upper = it.upper;
    item.gamma = gamma;
    if (thresholded(it.lower, it.upper, gamma)) {
      item.density_start = std::max(it.lower, threshold_point(gamma, it.upper));
      item.atom_mass = 0.0;
    } else {
      item.density_start = it.lower;
      item.atom_mass = std::max(0.0, 1.0 + gamma * std::log(it.lower / it.upper));
    }
    law.items.push_back(item);
  }
  return law;
}

ClosedForm two_item_closed_form(const Instance& instance) {
  if (instance.size() != 2) {
    throw Error(Errc::ShapeMismatch, "two_item_closed_form needs exactly two items");
  }
  const auto& order = instance.ratio_order();
  const Item& a = instance[order[0]];  // smaller lower/upper
  const Item& b = instance[order[1]];
  if (b.zero_lower()) return {0.0, 1};

  const bool case_one =
      a.zero_lower() ||
      std::log(b.lower * a.upper / (b.upper * a.lower)) - 1.0 > a.lower / b.lower;
  if (case_one) {
    const double w = scalar::lambert_w0(a.upper / (std::numbers::e * b.upper));
    return {1.0 / (w + std::log(b.upper / b.lower) + 1.0), 1};
  }
  const double num = a.lower + b.lower;
  const double den = a.lower * (1.0 + std::log(a.upper / a.lower)) +
                     b.lower * (1.0 + std::log(b.upper / b.lower));
  return {num / den, 2};
}

double gap_vs_separable(const Instance& instance) {
  const std::size_t last = sole_positive_lower(instance);
  double others = 0.0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (j != last) others += instance.upper(j);
  }
  const double r = separable::single_item(instance.lower(last), instance.upper(last)).ratio;
  const double w = scalar::lambert_w0(others / (std::numbers::e * instance.upper(last)));
  return (1.0 + r * w) / (1.0 + others / instance.lower(last));
}

double semi_separable_ratio_zero_lower(const Instance& instance) {
  const std::size_t last = sole_positive_lower(instance);
  double others = 0.0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (j != last) others += instance.upper(j);
  }
  const double r = separable::single_item(instance.lower(last), instance.upper(last)).ratio;
  const double w = scalar::lambert_w0(others / (std::numbers::e * instance.upper(last)));
  return 1.0 / (1.0 / r + w);
}

}  // namespace semisep::semi_separable
